import { forceLayout, Point } from "./layout.js";
import { renderOrder, depthOf } from "./history.js";
import { ViewModel } from "./viewmodel.js";
import { arrowsOf, SessionView } from "./types.js";

const VERTEX_RADIUS = 17;

/** Canvas + DOM renderer.  Every string shown in a panel is copied
 * verbatim from the session payload; the only client-side computation is
 * geometry. */
export class Renderer {
  private pinned = new Map<number, Point>();
  private positions = new Map<number, Point>();
  private dragging: number | null = null;
  private lastQuiverKey = "";

  constructor(
    private vm: ViewModel,
    private canvas: HTMLCanvasElement,
    private panels: {
      cluster: HTMLElement;
      coefficients: HTMLElement;
      cmatrix: HTMLElement;
      gmatrix: HTMLElement;
      fpolys: HTMLElement;
      history: HTMLElement;
      sequence: HTMLElement;
    },
  ) {
    vm.onChange((view) => this.render(view));
    canvas.addEventListener("mousedown", (ev) => this.onDown(ev));
    canvas.addEventListener("mousemove", (ev) => this.onMove(ev));
    canvas.addEventListener("mouseup", (ev) => this.onUp(ev));
  }

  private vertexAt(x: number, y: number): number | null {
    for (const [v, p] of this.positions) {
      if (Math.hypot(p.x - x, p.y - y) <= VERTEX_RADIUS + 3) return v;
    }
    return null;
  }

  private canvasPoint(ev: MouseEvent): Point {
    const rect = this.canvas.getBoundingClientRect();
    return { x: ev.clientX - rect.left, y: ev.clientY - rect.top };
  }

  private onDown(ev: MouseEvent): void {
    const p = this.canvasPoint(ev);
    const v = this.vertexAt(p.x, p.y);
    if (v !== null && ev.shiftKey) {
      this.dragging = v;
    }
  }

  private onMove(ev: MouseEvent): void {
    if (this.dragging === null) return;
    const p = this.canvasPoint(ev);
    this.pinned.set(this.dragging, p);
    this.positions.set(this.dragging, p);
    if (this.vm.view) this.drawQuiver(this.vm.view);
  }

  private onUp(ev: MouseEvent): void {
    if (this.dragging !== null) {
      this.dragging = null;
      return;
    }
    const p = this.canvasPoint(ev);
    const v = this.vertexAt(p.x, p.y);
    if (v !== null && this.vm.isMutable(v)) {
      void this.vm.clickVertex(v);
    }
  }

  render(view: SessionView): void {
    const key = JSON.stringify([view.quiver.m, view.quiver.n]);
    if (key !== this.lastQuiverKey) {
      this.pinned.clear();
      this.lastQuiverKey = key;
    }
    this.drawQuiver(view);
    this.renderStrings(view);
    this.renderHistory(view);
  }

  private drawQuiver(view: SessionView): void {
    const ctx = this.canvas.getContext("2d");
    if (!ctx) return;
    const { width, height } = this.canvas;
    const arrows = arrowsOf(view.quiver);
    this.positions = forceLayout(view.quiver.m, arrows, width, height, this.pinned);
    ctx.clearRect(0, 0, width, height);
    ctx.strokeStyle = "#555";
    ctx.fillStyle = "#555";
    ctx.lineWidth = 1.4;
    for (const arrow of arrows) {
      const a = this.positions.get(arrow.source)!;
      const b = this.positions.get(arrow.target)!;
      const dx = b.x - a.x;
      const dy = b.y - a.y;
      const dist = Math.max(Math.hypot(dx, dy), 1e-6);
      const sx = a.x + (dx / dist) * (VERTEX_RADIUS + 2);
      const sy = a.y + (dy / dist) * (VERTEX_RADIUS + 2);
      const tx = b.x - (dx / dist) * (VERTEX_RADIUS + 4);
      const ty = b.y - (dy / dist) * (VERTEX_RADIUS + 4);
      ctx.beginPath();
      ctx.moveTo(sx, sy);
      ctx.lineTo(tx, ty);
      ctx.stroke();
      const angle = Math.atan2(dy, dx);
      ctx.beginPath();
      ctx.moveTo(tx, ty);
      ctx.lineTo(tx - 9 * Math.cos(angle - 0.4), ty - 9 * Math.sin(angle - 0.4));
      ctx.lineTo(tx - 9 * Math.cos(angle + 0.4), ty - 9 * Math.sin(angle + 0.4));
      ctx.closePath();
      ctx.fill();
      const [v1, v2] = arrow.valuation;
      if (v1 !== 1 || v2 !== 1) {
        ctx.font = "11px sans-serif";
        ctx.fillText(`(${v1},${v2})`, (sx + tx) / 2 + 6, (sy + ty) / 2 - 6);
      }
    }
    for (let v = 1; v <= view.quiver.m; v++) {
      const p = this.positions.get(v)!;
      const frozen = v > view.quiver.n;
      ctx.beginPath();
      if (frozen) {
        ctx.rect(p.x - VERTEX_RADIUS, p.y - VERTEX_RADIUS, 2 * VERTEX_RADIUS, 2 * VERTEX_RADIUS);
        ctx.fillStyle = "#dbe9f8";
      } else {
        ctx.arc(p.x, p.y, VERTEX_RADIUS, 0, 2 * Math.PI);
        ctx.fillStyle = "#f8e9db";
      }
      ctx.fill();
      ctx.strokeStyle = "#333";
      ctx.stroke();
      ctx.fillStyle = "#222";
      ctx.font = "13px sans-serif";
      ctx.textAlign = "center";
      ctx.textBaseline = "middle";
      ctx.fillText(String(v), p.x, p.y);
    }
  }

  private renderStrings(view: SessionView): void {
    this.panels.cluster.replaceChildren(
      ...view.cluster.map((value, i) => {
        const li = document.createElement("li");
        li.textContent = `x${i + 1}(t) = ${value}`;
        return li;
      }),
    );
    this.panels.coefficients.replaceChildren(
      ...view.coefficients.values.map((value, i) => {
        const li = document.createElement("li");
        li.textContent = `y${i + 1}(t) = ${value}`;
        return li;
      }),
    );
    this.panels.cmatrix.textContent = gridText(view.c);
    this.panels.gmatrix.textContent = gridText(view.g);
    this.panels.fpolys.replaceChildren(
      ...(view.f ?? []).map((value, i) => {
        const li = document.createElement("li");
        li.textContent = `F${i + 1}(t) = ${value}`;
        return li;
      }),
    );
    this.panels.sequence.textContent =
      view.sequence.length > 0 ? view.sequence.join(", ") : "(initial seed)";
  }

  private renderHistory(view: SessionView): void {
    const nodes = renderOrder(view.history.nodes);
    this.panels.history.replaceChildren(
      ...nodes.map((node) => {
        const li = document.createElement("li");
        const button = document.createElement("button");
        const depth = depthOf(view.history.nodes, node.id);
        const label = node.parent === null ? "initial seed" : `mu_${node.vertex}`;
        button.textContent = `${"  ".repeat(depth)}${label}`;
        if (node.id === view.history.cursor) {
          button.classList.add("cursor");
        }
        button.addEventListener("click", () => void this.vm.navigateTo(node.id));
        li.append(button);
        return li;
      }),
    );
  }
}

function gridText(matrix?: number[][]): string {
  if (!matrix) return "(not available)";
  const width = Math.max(...matrix.flat().map((x) => String(x).length));
  return matrix.map((row) => row.map((x) => String(x).padStart(width)).join(" ")).join("\n");
}
