import { ApiClient, ApiRequestError } from "./api.js";
import { pathToNode } from "./history.js";
import { SessionView } from "./types.js";

export type ToastHandler = (message: string) => void;
export type ChangeHandler = (view: SessionView) => void;

/** State container: queues user actions so at most one request is in
 * flight, mirrors the last server payload verbatim, and never computes
 * any cluster algebra on its own. */
export class ViewModel {
  view: SessionView | null = null;
  private queue: Promise<void> = Promise.resolve();
  private changeHandlers: ChangeHandler[] = [];
  private toastHandlers: ToastHandler[] = [];

  constructor(private api: ApiClient) {}

  onChange(handler: ChangeHandler): void {
    this.changeHandlers.push(handler);
  }

  onToast(handler: ToastHandler): void {
    this.toastHandlers.push(handler);
  }

  private publish(view: SessionView): void {
    this.view = view;
    for (const handler of this.changeHandlers) handler(view);
  }

  private toast(message: string): void {
    for (const handler of this.toastHandlers) handler(message);
  }

  /** Serialize an action onto the queue; API failures become toasts. */
  private enqueue(action: () => Promise<SessionView>): Promise<void> {
    this.queue = this.queue.then(async () => {
      try {
        this.publish(await action());
      } catch (err) {
        if (err instanceof ApiRequestError) {
          this.toast(err.body.error);
        } else {
          this.toast(String(err));
        }
      }
    });
    return this.queue;
  }

  /** Wait until every queued action has settled (used by tests). */
  idle(): Promise<void> {
    return this.queue;
  }

  refresh(): Promise<void> {
    return this.enqueue(() => this.api.session());
  }

  isMutable(vertex: number): boolean {
    return this.view !== null && vertex >= 1 && vertex <= this.view.quiver.n;
  }

  /** Frozen vertices are unclickable: no request is issued for them. */
  clickVertex(vertex: number): Promise<void> {
    if (!this.isMutable(vertex)) {
      return this.queue;
    }
    return this.enqueue(() => this.api.mutate(vertex));
  }

  undo(): Promise<void> {
    return this.enqueue(() => this.api.undo());
  }

  /** Navigate to a history node: reset to the initial seed, then replay
   * the path from the root (the server re-derives every displayed value). */
  navigateTo(nodeId: number): Promise<void> {
    return this.enqueue(async () => {
      if (!this.view) throw new Error("no session loaded");
      const path = pathToNode(this.view.history.nodes, nodeId);
      let state = await this.api.reset(this.view.initial);
      for (const vertex of path) {
        state = await this.api.mutate(vertex);
      }
      return state;
    });
  }
}
