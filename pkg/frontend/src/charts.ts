/** Minimal canvas strip charts keyed to the learner step counter. */
import { RingBuffer } from "./buffers.js";
import { ChartPoint } from "./viewmodel.js";

export interface Series {
  buffer: RingBuffer<ChartPoint>;
  color: string;
  label: string;
}

export interface StripChartOptions {
  title: string;
  yMin?: number;
  yMax?: number;
  /** half-width of a shaded band drawn around the first series */
  band?: number;
}

export class StripChart {
  private readonly ctx: CanvasRenderingContext2D;

  constructor(private readonly canvas: HTMLCanvasElement,
              private readonly series: Series[],
              private readonly opts: StripChartOptions) {
    const ctx = canvas.getContext("2d");
    if (!ctx) throw new Error("canvas 2d context unavailable");
    this.ctx = ctx;
  }

  draw(): void {
    const { ctx, canvas } = this;
    const w = canvas.width;
    const h = canvas.height;
    ctx.clearRect(0, 0, w, h);
    ctx.fillStyle = "#14181f";
    ctx.fillRect(0, 0, w, h);

    const points = this.series.map((s) => s.buffer.toArray());
    const all = points.flat();
    if (!all.length) {
      this.drawTitle();
      return;
    }
    const tMin = Math.min(...points.map((p) => (p.length ? p[0].t : Infinity)));
    const tMax = Math.max(...points.map((p) => (p.length ? p[p.length - 1].t : -Infinity)));
    let yMin = this.opts.yMin ?? Math.min(...all.map((p) => p.value));
    let yMax = this.opts.yMax ?? Math.max(...all.map((p) => p.value));
    if (this.opts.band !== undefined) {
      yMin -= this.opts.band;
      yMax += this.opts.band;
    }
    if (yMax - yMin < 1e-9) {
      yMax += 0.5;
      yMin -= 0.5;
    }
    const x = (t: number) => (tMax === tMin ? w - 1 : ((t - tMin) / (tMax - tMin)) * (w - 2) + 1);
    const y = (v: number) => h - ((v - yMin) / (yMax - yMin)) * (h - 14) - 2;

    if (this.opts.band !== undefined && points[0].length) {
      ctx.beginPath();
      const band = this.opts.band;
      const first = points[0];
      for (let i = 0; i < first.length; i++) ctx.lineTo(x(first[i].t), y(first[i].value + band));
      for (let i = first.length - 1; i >= 0; i--) ctx.lineTo(x(first[i].t), y(first[i].value - band));
      ctx.closePath();
      ctx.fillStyle = "rgba(130, 170, 255, 0.12)";
      ctx.fill();
    }

    this.series.forEach((s, si) => {
      const pts = points[si];
      if (!pts.length) return;
      ctx.beginPath();
      pts.forEach((p, i) => (i ? ctx.lineTo(x(p.t), y(p.value)) : ctx.moveTo(x(p.t), y(p.value))));
      ctx.strokeStyle = s.color;
      ctx.lineWidth = 1.25;
      ctx.stroke();
    });
    this.drawTitle();
    const last = points[0][points[0].length - 1];
    if (last) {
      ctx.fillStyle = "#9aa7b8";
      ctx.font = "10px monospace";
      ctx.textAlign = "right";
      ctx.fillText(`t=${last.t}`, w - 4, 10);
    }
  }

  private drawTitle(): void {
    const { ctx } = this;
    ctx.fillStyle = "#d5dde8";
    ctx.font = "11px sans-serif";
    ctx.textAlign = "left";
    ctx.fillText(this.opts.title, 6, 11);
    let xOff = this.ctx.measureText(this.opts.title).width + 16;
    for (const s of this.series) {
      ctx.fillStyle = s.color;
      ctx.fillText(s.label, xOff, 11);
      xOff += ctx.measureText(s.label).width + 12;
    }
  }
}

/** Vertical bar showing the smoothed control signal in [0, 1]. */
export class EmgGauge {
  private readonly ctx: CanvasRenderingContext2D;

  constructor(private readonly canvas: HTMLCanvasElement) {
    const ctx = canvas.getContext("2d");
    if (!ctx) throw new Error("canvas 2d context unavailable");
    this.ctx = ctx;
  }

  draw(level: number): void {
    const { ctx, canvas } = this;
    const w = canvas.width;
    const h = canvas.height;
    const clamped = Math.min(1, Math.max(0, level));
    ctx.clearRect(0, 0, w, h);
    ctx.fillStyle = "#14181f";
    ctx.fillRect(0, 0, w, h);
    const barH = (h - 22) * clamped;
    ctx.fillStyle = "#53c98f";
    ctx.fillRect(6, h - 6 - barH, w - 12, barH);
    ctx.strokeStyle = "#39414d";
    ctx.strokeRect(6, 16, w - 12, h - 22);
    ctx.fillStyle = "#d5dde8";
    ctx.font = "11px sans-serif";
    ctx.textAlign = "left";
    ctx.fillText("EMG", 6, 11);
    ctx.fillStyle = "#9aa7b8";
    ctx.font = "10px monospace";
    ctx.fillText(clamped.toFixed(2), w - 34, 11);
  }
}
