/** Tiny DOM helpers; no framework, just strings and event wiring. */

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function colorName(code: string): string {
  switch (code) {
    case "G":
      return "Green";
    case "Y":
      return "Yellow";
    case "W":
      return "White";
    case "R":
      return "Red";
    default:
      return code;
  }
}

export function onClick(
  root: ParentNode,
  selector: string,
  handler: (element: HTMLElement, event: Event) => void,
): void {
  root.querySelectorAll<HTMLElement>(selector).forEach((element) => {
    element.addEventListener("click", (event) => handler(element, event));
  });
}
