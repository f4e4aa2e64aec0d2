import { HttpApi } from "./api.js";
import { ReviewFlow } from "./state.js";
import { render } from "./ui.js";

export function mount(root: HTMLElement, baseUrl = ""): ReviewFlow {
  const api = new HttpApi(baseUrl);
  const flow: ReviewFlow = new ReviewFlow(api, (state) => render(root, state, flow));
  render(root, flow.state, flow);
  return flow;
}

const root = typeof document !== "undefined" ? document.getElementById("app") : null;
if (root) {
  mount(root);
}
