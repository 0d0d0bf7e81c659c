// Pointer-driven virtual joystick: a knob inside a round base, snapping
// back to center on release. Emits axes in [-1, 1] (y up).

export class VirtualJoystick {
  axisX = 0;
  axisY = 0;
  onChange: (x: number, y: number) => void = () => {};

  private pointerId: number | null = null;

  constructor(private base: HTMLElement, private knob: HTMLElement) {
    base.addEventListener("pointerdown", (e) => {
      if (this.pointerId !== null) return;
      this.pointerId = e.pointerId;
      base.setPointerCapture(e.pointerId);
      this.track(e);
    });
    base.addEventListener("pointermove", (e) => {
      if (e.pointerId === this.pointerId) this.track(e);
    });
    const release = (e: PointerEvent) => {
      if (e.pointerId !== this.pointerId) return;
      this.pointerId = null;
      this.set(0, 0);
    };
    base.addEventListener("pointerup", release);
    base.addEventListener("pointercancel", release);
  }

  private track(e: PointerEvent): void {
    const rect = this.base.getBoundingClientRect();
    const r = rect.width / 2;
    let dx = (e.clientX - rect.left - r) / r;
    let dy = -(e.clientY - rect.top - r) / r;
    const mag = Math.hypot(dx, dy);
    if (mag > 1) {
      dx /= mag;
      dy /= mag;
    }
    this.set(dx, dy);
  }

  set(x: number, y: number): void {
    this.axisX = x;
    this.axisY = y;
    const r = this.base.getBoundingClientRect().width / 2;
    this.knob.style.transform = `translate(${x * r * 0.7}px, ${-y * r * 0.7}px)`;
    this.onChange(x, y);
  }
}
