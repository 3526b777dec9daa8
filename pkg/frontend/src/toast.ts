/** Transient error banners for rejected mutations (HTTP 400/409). */
export function installToasts(container: HTMLElement): (message: string) => void {
  return (message: string) => {
    const node = document.createElement("div");
    node.className = "toast";
    node.textContent = message;
    container.append(node);
    setTimeout(() => node.remove(), 4000);
  };
}
