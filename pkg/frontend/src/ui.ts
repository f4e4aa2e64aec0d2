import { AppState, ReviewFlow } from "./state.js";
import { ArticleView, Candidate } from "./types.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

function renderArticle(article: ArticleView): HTMLElement {
  const card = el("article", { class: "article-card" });
  card.appendChild(el("h4", { class: "article-title" }, article.title));
  card.appendChild(el("p", { class: "article-abstract" }, article.abstract));
  const meta = el("dl", { class: "article-meta" });
  const field = (label: string, cls: string, value: string) => {
    meta.appendChild(el("dt", {}, label));
    meta.appendChild(el("dd", { class: cls }, value));
  };
  field("Authors", "article-authors", article.authors.join(", "));
  if (article.affiliations.length > 0) {
    field("Affiliations", "article-affiliations", article.affiliations.join("; "));
  }
  if (article.date !== null) {
    field("Published", "article-date", article.date);
  }
  field("Similarity rank", "article-rank", `#${article.rank} (${article.similarity.toFixed(4)})`);
  card.appendChild(meta);
  return card;
}

function renderForm(root: HTMLElement, state: AppState, flow: ReviewFlow): void {
  const form = el("form", { id: "query-form" });
  const title = el("input", { id: "title", placeholder: "Title", type: "text" });
  const abstract = el("textarea", { id: "abstract", placeholder: "Abstract" });
  const submit = el("button", { id: "submit", type: "submit" }, "Find reviewers");
  submit.disabled = true;

  const toggle = () => {
    submit.disabled = state.busy || (title.value.trim() === "" && abstract.value.trim() === "");
  };
  title.addEventListener("input", toggle);
  abstract.addEventListener("input", toggle);
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    void flow.submitQuery(title.value, abstract.value);
  });

  form.appendChild(el("h2", {}, "Submit an article"));
  form.appendChild(title);
  form.appendChild(abstract);
  form.appendChild(submit);
  root.appendChild(form);
}

function renderCandidate(root: HTMLElement, state: AppState, flow: ReviewFlow): void {
  const candidate = state.candidate as Candidate;
  const page = el("section", { id: "candidate" });
  page.appendChild(
    el("p", { id: "position" }, `Candidate ${candidate.position} of ${candidate.total_candidates}`),
  );
  page.appendChild(el("h2", { id: "candidate-name" }, candidate.display_name));
  page.appendChild(el("p", { id: "score" }, `score ${candidate.score.toFixed(5)}`));
  if (state.recomputeCount > 0) {
    page.appendChild(el("p", { id: "epoch" }, `recompute #${state.recomputeCount}`));
  }

  const evidence = el("div", { id: "articles" });
  for (const article of candidate.articles) {
    evidence.appendChild(renderArticle(article));
  }
  page.appendChild(evidence);

  // The verdict buttons are the only controls that move the review
  // forward; there is intentionally no "next" button.
  const controls = el("div", { id: "controls" });
  const validate = el("button", { id: "validate" }, "Validate");
  const invalidate = el("button", { id: "invalidate" }, "Invalidate");
  const recomputeButton = el("button", { id: "recompute" }, "Recompute");
  validate.disabled = invalidate.disabled = recomputeButton.disabled = state.busy;
  validate.addEventListener("click", () => void flow.verdict("accept"));
  invalidate.addEventListener("click", () => void flow.verdict("reject"));
  recomputeButton.addEventListener("click", () => void flow.recompute());
  controls.appendChild(validate);
  controls.appendChild(invalidate);
  controls.appendChild(recomputeButton);
  page.appendChild(controls);
  root.appendChild(page);
}

function renderSummary(root: HTMLElement, state: AppState): void {
  const page = el("section", { id: "summary" });
  page.appendChild(el("h2", {}, "Review complete"));
  const accepted = state.summary?.accepted ?? [];
  const list = el("ul", { id: "summary-accepted" });
  for (const authorId of accepted) {
    list.appendChild(el("li", { class: "accepted-author" }, authorId));
  }
  page.appendChild(el("p", {}, `${accepted.length} reviewer(s) accepted`));
  page.appendChild(list);

  const payload = JSON.stringify({ accepted }, null, 2);
  const exportLink = el(
    "a",
    {
      id: "export",
      download: "accepted-reviewers.json",
      href: `data:application/json;charset=utf-8,${encodeURIComponent(payload)}`,
    },
    "Export accepted reviewers (JSON)",
  );
  page.appendChild(exportLink);
  root.appendChild(page);
}

function renderError(root: HTMLElement, state: AppState): void {
  if (!state.error) {
    return;
  }
  const banner = el("div", { id: "error-banner", "data-code": state.error.code });
  banner.appendChild(el("span", {}, `${state.error.code}: ${state.error.message}`));
  if (state.error.retry) {
    const retry = el("button", { id: "retry" }, "Retry");
    const action = state.error.retry;
    retry.addEventListener("click", () => void action());
    banner.appendChild(retry);
  }
  root.appendChild(banner);
}

export function render(root: HTMLElement, state: AppState, flow: ReviewFlow): void {
  root.replaceChildren();
  renderError(root, state);
  if (state.phase === "form") {
    renderForm(root, state, flow);
  } else if (state.phase === "review" && state.candidate) {
    renderCandidate(root, state, flow);
  } else {
    renderSummary(root, state);
  }
}
