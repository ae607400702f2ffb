import { NODE_COLORS, aggregateShade } from "./colors.js";
import type { ConceptAggregateDoc, GraphDoc, NodeDoc } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const DEFAULT_SIDE = 20;

export interface GraphViewOptions {
  onSelect?: (node: NodeDoc) => void;
  onHover?: (node: NodeDoc | null) => void;
}

function hexPoints(x: number, y: number, side: number): string {
  const points: string[] = [];
  for (let k = 0; k < 6; k++) {
    const angle = ((60 * k - 90) * Math.PI) / 180;
    points.push(`${(x + side * Math.cos(angle)).toFixed(2)},${(y + side * Math.sin(angle)).toFixed(2)}`);
  }
  return points.join(" ");
}

/** Hexagonal dependency-graph view.
 *
 * Renders purely from a server graph document: positions come from the
 * layout section and are never recomputed here. Clicking a node highlights
 * every dependency path through it (ancestors and descendants closure);
 * marking a node flips it to its orange variant.
 */
export class GraphView {
  private doc: GraphDoc | null = null;
  private nodesById = new Map<string, NodeDoc>();
  private parents = new Map<string, string[]>();
  private children = new Map<string, string[]>();
  private marked = new Set<string>();
  private svg: SVGSVGElement | null = null;

  constructor(
    private readonly container: HTMLElement,
    private readonly options: GraphViewOptions = {},
  ) {}

  render(doc: GraphDoc): void {
    this.doc = doc;
    this.nodesById = new Map(doc.nodes.map((n) => [n.id, n]));
    this.parents = new Map();
    this.children = new Map();
    for (const [u, v] of doc.edges) {
      this.children.set(u, [...(this.children.get(u) ?? []), v]);
      this.parents.set(v, [...(this.parents.get(v) ?? []), u]);
    }
    this.marked = new Set(
      doc.nodes.filter((n) => n.my_score !== undefined && n.my_score !== null).map((n) => n.id),
    );

    const side = doc.hex_side ?? DEFAULT_SIDE;
    const cells = Object.values(doc.layout);
    const pad = side * 2;
    const minX = Math.min(...cells.map((c) => c.x)) - pad;
    const maxX = Math.max(...cells.map((c) => c.x)) + pad;
    const minY = Math.min(...cells.map((c) => c.y)) - pad;
    const maxY = Math.max(...cells.map((c) => c.y)) + pad;

    const svg = document.createElementNS(SVG_NS, "svg");
    svg.setAttribute("viewBox", `${minX} ${minY} ${maxX - minX} ${maxY - minY}`);
    svg.setAttribute("class", "graph-view");

    for (const [u, v] of doc.edges) {
      const a = doc.layout[u];
      const b = doc.layout[v];
      if (!a || !b) continue;
      const skeletonEdge =
        this.nodesById.get(u)?.kind !== "prerequisite" &&
        this.nodesById.get(v)?.kind !== "prerequisite";
      const line = document.createElementNS(SVG_NS, "line");
      line.setAttribute("x1", String(a.x));
      line.setAttribute("y1", String(a.y));
      line.setAttribute("x2", String(b.x));
      line.setAttribute("y2", String(b.y));
      line.setAttribute("data-edge", `${u}:${v}`);
      line.setAttribute("class", skeletonEdge ? "edge edge-skeleton" : "edge edge-prereq");
      line.setAttribute("stroke", "#555555");
      svg.appendChild(line);
    }

    for (const node of doc.nodes) {
      const cell = doc.layout[node.id];
      if (!cell) continue;
      const polygon = document.createElementNS(SVG_NS, "polygon");
      polygon.setAttribute("points", hexPoints(cell.x, cell.y, side));
      polygon.setAttribute("data-node-id", node.id);
      polygon.setAttribute("class", `node kind-${node.kind}`);
      const title = document.createElementNS(SVG_NS, "title");
      title.textContent = node.name;
      polygon.appendChild(title);
      polygon.addEventListener("click", () => {
        this.highlightPath(node.id);
        this.options.onSelect?.(node);
      });
      polygon.addEventListener("mouseenter", () => this.options.onHover?.(node));
      polygon.addEventListener("mouseleave", () => this.options.onHover?.(null));
      svg.appendChild(polygon);
    }

    this.container.replaceChildren(svg);
    this.svg = svg;
    this.applyColors();
  }

  /** Latest own score arrived or was just submitted: recolor the node. */
  setScore(nodeId: string, score: number | null): void {
    const node = this.nodesById.get(nodeId);
    if (node) node.my_score = score;
    if (score === null) {
      this.marked.delete(nodeId);
    } else {
      this.marked.add(nodeId);
    }
    this.applyColors();
  }

  isMarked(nodeId: string): boolean {
    return this.marked.has(nodeId);
  }

  fillOf(nodeId: string): string {
    const node = this.nodesById.get(nodeId);
    if (!node) return NODE_COLORS.skeleton;
    if (node.kind === "prerequisite") {
      return this.marked.has(nodeId) ? NODE_COLORS.prerequisiteMarked : NODE_COLORS.prerequisite;
    }
    return this.marked.has(nodeId) ? NODE_COLORS.skeletonMarked : NODE_COLORS.skeleton;
  }

  private applyColors(): void {
    if (!this.svg) return;
    for (const polygon of this.svg.querySelectorAll<SVGPolygonElement>("polygon[data-node-id]")) {
      const id = polygon.getAttribute("data-node-id")!;
      polygon.setAttribute("fill", this.fillOf(id));
      polygon.classList.toggle("marked", this.marked.has(id));
    }
  }

  /** Instructor shading: aggregate intensity picks the hue, alpha the opacity. */
  applyAggregates(aggregates: ConceptAggregateDoc[]): void {
    if (!this.svg) return;
    const byId = new Map(aggregates.map((a) => [a.concept_id, a]));
    for (const polygon of this.svg.querySelectorAll<SVGPolygonElement>("polygon[data-node-id]")) {
      const aggregate = byId.get(polygon.getAttribute("data-node-id")!);
      if (!aggregate) continue;
      const shade = aggregateShade(aggregate.intensity, aggregate.alpha);
      polygon.setAttribute("fill", shade.fill);
      polygon.setAttribute("fill-opacity", shade.opacity.toFixed(3));
    }
  }

  private closure(start: string, step: Map<string, string[]>): Set<string> {
    const seen = new Set<string>();
    const stack = [start];
    while (stack.length > 0) {
      const current = stack.pop()!;
      for (const next of step.get(current) ?? []) {
        if (!seen.has(next)) {
          seen.add(next);
          stack.push(next);
        }
      }
    }
    return seen;
  }

  /** Nodes and edges on any dependency path through `nodeId`. */
  pathThrough(nodeId: string): { nodes: Set<string>; edges: Set<string> } {
    const ancestors = this.closure(nodeId, this.parents);
    const descendants = this.closure(nodeId, this.children);
    const nodes = new Set<string>([nodeId, ...ancestors, ...descendants]);
    const edges = new Set<string>();
    for (const [u, v] of this.doc?.edges ?? []) {
      const upstream = ancestors.has(u) && (ancestors.has(v) || v === nodeId);
      const downstream = (descendants.has(u) || u === nodeId) && descendants.has(v);
      if (upstream || downstream) edges.add(`${u}:${v}`);
    }
    return { nodes, edges };
  }

  highlightPath(nodeId: string): void {
    if (!this.svg) return;
    const { nodes, edges } = this.pathThrough(nodeId);
    for (const polygon of this.svg.querySelectorAll<SVGPolygonElement>("polygon[data-node-id]")) {
      const id = polygon.getAttribute("data-node-id")!;
      polygon.classList.toggle("on-path", nodes.has(id));
      polygon.classList.toggle("dimmed", !nodes.has(id));
    }
    for (const line of this.svg.querySelectorAll<SVGLineElement>("line[data-edge]")) {
      line.classList.toggle("on-path", edges.has(line.getAttribute("data-edge")!));
    }
  }

  clearHighlight(): void {
    if (!this.svg) return;
    for (const el of this.svg.querySelectorAll(".on-path, .dimmed")) {
      el.classList.remove("on-path", "dimmed");
    }
  }
}
