import { ApiClient } from "./api.js";
import { Renderer } from "./render.js";
import { installToasts } from "./toast.js";
import { ViewModel } from "./viewmodel.js";

function element<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

export function start(base: string = ""): ViewModel {
  const api = new ApiClient(base || window.location.origin.replace(/:\d+$/, ":8642"));
  const vm = new ViewModel(api);
  const renderer = new Renderer(vm, element<HTMLCanvasElement>("quiver-canvas"), {
    cluster: element("cluster-panel"),
    coefficients: element("coefficient-panel"),
    cmatrix: element("c-matrix"),
    gmatrix: element("g-matrix"),
    fpolys: element("f-panel"),
    history: element("history-panel"),
    sequence: element("sequence-panel"),
  });
  void renderer;
  vm.onToast(installToasts(element("toasts")));
  element("undo-button").addEventListener("click", () => void vm.undo());
  void vm.refresh();
  return vm;
}

if (typeof document !== "undefined" && document.getElementById("quiver-canvas")) {
  start();
}
