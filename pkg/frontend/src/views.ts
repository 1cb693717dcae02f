import { progressText, type ClientState, type TabName } from "./state.js";
import {
  PREDICATE_LABELS,
  SCALE_OPTIONS,
  type CatalogNode,
  type HistogramBar,
  type HistogramPayload,
  type ProgressionRow,
  type SessionSummary,
} from "./types.js";

type Child = Node | string;

export function el(
  tag: string,
  attrs: Record<string, string> = {},
  ...children: Child[]
): HTMLElement {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  for (const child of children) {
    node.append(child);
  }
  return node;
}

function clear(container: HTMLElement): void {
  container.replaceChildren();
}

// width of a 0..4 value as a percentage of the shared axis; geometry only,
// the displayed number is always the server's display string
function barWidth(num: number | null, den: number | null): string {
  if (num === null || den === null || den === 0) return "0%";
  return `${(num / (den * 4)) * 100}%`;
}

export interface LoginHandlers {
  onCreate: (user: string) => void;
  onResume: (sessionId: string) => void;
}

export function renderLogin(
  container: HTMLElement,
  sessions: SessionSummary[],
  handlers: LoginHandlers,
): void {
  clear(container);
  const input = el("input", {
    id: "login-user",
    placeholder: "your name",
    autocomplete: "off",
  }) as HTMLInputElement;
  const button = el("button", { id: "login-create" }, "Start assessing") as HTMLButtonElement;
  button.addEventListener("click", () => {
    if (input.value.trim()) handlers.onCreate(input.value.trim());
  });
  const form = el("div", { class: "login" },
    el("h1", {}, "ISO 27001 readiness"),
    el("p", {}, "Sign in with a name to start a new assessment session."),
    input,
    button,
  );
  if (sessions.length > 0) {
    const list = el("ul", { class: "session-list" });
    for (const session of sessions) {
      const resume = el(
        "button",
        { class: "resume", "data-session": session.session_id },
        `resume ${session.user} (${session.experiments} experiments)`,
      );
      resume.addEventListener("click", () => handlers.onResume(session.session_id));
      list.append(el("li", {}, resume));
    }
    form.append(el("h2", {}, "or resume a session"), list);
  }
  container.append(form);
}

export interface ShellHandlers {
  onTab: (tab: TabName) => void;
}

export function renderShell(
  container: HTMLElement,
  state: ClientState,
  handlers: ShellHandlers,
): HTMLElement {
  clear(container);
  const tabs: TabName[] = ["assessment", "histogram", "summarize"];
  const bar = el("nav", { class: "tabs" });
  for (const tab of tabs) {
    const button = el(
      "button",
      {
        class: tab === state.activeTab ? "tab active" : "tab",
        "data-tab": tab,
      },
      tab[0].toUpperCase() + tab.slice(1),
    );
    button.addEventListener("click", () => handlers.onTab(tab));
    bar.append(button);
  }
  const banner = el("div", { id: "error-banner", class: "banner hidden" });
  const view = el("main", { id: "view" });
  container.append(
    el("header", {},
      el("span", { class: "brand" }, "ISO 27001 readiness"),
      el("span", { id: "whoami" }, state.user ?? ""),
      bar,
    ),
    banner,
    view,
  );
  return view;
}

export function updateBanner(state: ClientState): void {
  const banner = document.getElementById("error-banner");
  if (!banner) return;
  if (state.serverError) {
    banner.textContent = state.serverError;
    banner.classList.remove("hidden");
  } else {
    banner.textContent = "";
    banner.classList.add("hidden");
  }
}

// --- assessment tab ---------------------------------------------------------

export function renderAssessment(
  container: HTMLElement,
  state: ClientState,
  onScore: (leafId: string, value: number) => void,
): void {
  clear(container);
  if (!state.catalog) return;
  container.append(
    el("div", { class: "progress" },
      el("span", { id: "progress-text" }, progressText(state)),
    ),
    el("div", { id: "domain-tiles", class: "tiles" }),
  );
  const form = el("div", { class: "catalog-form" });
  for (const domain of state.catalog.root.children ?? []) {
    form.append(renderDomainSection(domain, state, onScore));
  }
  container.append(form);
  updateLiveScores(state);
}

function renderDomainSection(
  domain: CatalogNode,
  state: ClientState,
  onScore: (leafId: string, value: number) => void,
): HTMLElement {
  const section = el("section", { class: "domain", "data-node": domain.id },
    el("h2", {}, domain.name),
  );
  for (const child of domain.children ?? []) {
    section.append(renderBranch(child, state, onScore));
  }
  return section;
}

function renderBranch(
  node: CatalogNode,
  state: ClientState,
  onScore: (leafId: string, value: number) => void,
): HTMLElement {
  if (node.kind === "issue") {
    return renderIssueRow(node, state, onScore);
  }
  const heading = node.kind === "class" ? "h3" : "h4";
  const block = el("div", { class: node.kind, "data-node": node.id },
    el(heading, {}, node.name),
  );
  for (const child of node.children ?? []) {
    block.append(renderBranch(child, state, onScore));
  }
  return block;
}

function renderIssueRow(
  issue: CatalogNode,
  state: ClientState,
  onScore: (leafId: string, value: number) => void,
): HTMLElement {
  const select = el("select", { "data-issue": issue.id }) as HTMLSelectElement;
  select.append(el("option", { value: "" }, "unanswered"));
  SCALE_OPTIONS.forEach((label, value) => {
    select.append(el("option", { value: String(value) }, label));
  });
  const current = state.draftScores[issue.id];
  select.value = current === undefined ? "" : String(current);
  select.addEventListener("change", () => {
    if (select.value !== "") onScore(issue.id, Number(select.value));
  });
  return el("div", { class: "issue" },
    el("label", {}, issue.description ?? issue.name),
    select,
  );
}

// refresh the live numbers (tiles, progress) without rebuilding the form,
// so selector focus and scroll position survive each server response
export function updateLiveScores(state: ClientState): void {
  const progress = document.getElementById("progress-text");
  if (progress) progress.textContent = progressText(state);
  const tiles = document.getElementById("domain-tiles");
  if (!tiles || !state.catalog) return;
  tiles.replaceChildren();
  for (const domain of state.catalog.root.children ?? []) {
    const score = state.lastReport?.per_node[domain.id];
    tiles.append(
      el("div", { class: "tile", "data-domain": domain.id },
        el("span", { class: "tile-name" }, domain.name),
        el("span", { class: "tile-value" }, score ? score.achievement : "–"),
      ),
    );
  }
  updateBanner(state);
}

// --- histogram tab ----------------------------------------------------------

export function renderHistogram(
  container: HTMLElement,
  state: ClientState,
  data: HistogramPayload,
  onLevel: (level: "domain" | "control") => void,
): void {
  clear(container);
  const toggle = el("div", { class: "level-toggle" });
  for (const level of ["domain", "control"] as const) {
    const button = el(
      "button",
      {
        class: level === state.histogramLevel ? "level active" : "level",
        "data-level": level,
      },
      level,
    );
    button.addEventListener("click", () => onLevel(level));
    toggle.append(button);
  }
  container.append(
    el("h2", {}, `Achievement vs priority by ${data.level}`),
    toggle,
  );
  const chart = el("div", { class: "chart" });
  for (const bar of data.bars) {
    chart.append(renderBarPair(bar));
  }
  container.append(chart);
}

function renderBarPair(bar: HistogramBar): HTMLElement {
  const achievement = el("div", { class: "bar achievement" });
  achievement.style.width = barWidth(bar.achievement_num, bar.achievement_den);
  const priority = el("div", { class: "bar priority" });
  priority.style.width = barWidth(bar.priority_num, bar.priority_den);
  return el("div", { class: "bar-pair", "data-node": bar.node_id },
    el("div", { class: "bar-label" }, bar.label),
    el("div", { class: "bar-track" },
      achievement,
      el("span", { class: "bar-value achievement-value" }, bar.achievement ?? "–"),
    ),
    el("div", { class: "bar-track" },
      priority,
      el("span", { class: "bar-value priority-value" }, bar.priority ?? "–"),
    ),
  );
}

// --- summarize tab ----------------------------------------------------------

export interface SummarizeHandlers {
  onFinish: () => void;
}

export function renderSummarize(
  container: HTMLElement,
  state: ClientState,
  progression: ProgressionRow[],
  handlers: SummarizeHandlers,
): void {
  clear(container);
  const report = state.lastReport;
  if (!report) {
    container.append(el("p", {}, "No report yet."));
    return;
  }
  const grade = report.overall ? report.overall.achievement : null;
  const features = el("div", { class: "features" },
    feature("grade", grade === null ? "–" : `${grade} / 4`),
    feature("percentage", report.percentage === null ? "–" : `${report.percentage}%`),
    feature(
      "predicate",
      report.predicate === null
        ? "–"
        : PREDICATE_LABELS[report.predicate] ?? report.predicate,
    ),
    feature("answered", progressText(state)),
  );
  const finish = el("button", { id: "finish-experiment" }, "Finish experiment");
  finish.addEventListener("click", handlers.onFinish);

  container.append(
    el("h2", {}, "Summary"),
    features,
    el("p", { id: "advice-narrative" }, report.advice.narrative),
    renderAdviceLists(report),
    finish,
    el("h2", {}, "Progression"),
    renderProgression(progression),
  );
}

function feature(name: string, value: string): HTMLElement {
  return el("div", { class: "feature", "data-feature": name },
    el("span", { class: "feature-name" }, name),
    el("span", { class: "feature-value" }, value),
  );
}

function renderAdviceLists(report: { advice: ClientReportAdvice }): HTMLElement {
  const advice = report.advice;
  const block = el("div", { class: "advice-lists" });
  block.append(
    adviceList("strongest areas", advice.strongest_domains.slice(0, 2), "achievement"),
    adviceList("weakest areas", advice.weakest_domains.slice(0, 2), "priority"),
    adviceList("controls needing attention", advice.flagged_controls, "priority"),
  );
  return block;
}

type ClientReportAdvice = {
  strongest_domains: { node_id: string; label: string; achievement?: string; priority?: string }[];
  weakest_domains: { node_id: string; label: string; achievement?: string; priority?: string }[];
  flagged_controls: { node_id: string; label: string; achievement?: string; priority?: string }[];
};

function adviceList(
  title: string,
  entries: { node_id: string; label: string; achievement?: string; priority?: string }[],
  key: "achievement" | "priority",
): HTMLElement {
  const list = el("ul", { class: "advice", "data-advice": title });
  for (const entry of entries) {
    list.append(
      el("li", { "data-node": entry.node_id }, `${entry.label}: ${entry[key] ?? "–"}`),
    );
  }
  if (entries.length === 0) {
    list.append(el("li", { class: "empty" }, "none"));
  }
  return el("div", {}, el("h3", {}, title), list);
}

function renderProgression(rows: ProgressionRow[]): HTMLElement {
  if (rows.length === 0) {
    return el("p", { id: "progression-empty" }, "No experiments finished yet.");
  }
  const table = el("table", { id: "progression" });
  table.append(
    el("tr", {},
      el("th", {}, "#"),
      el("th", {}, "finished"),
      el("th", {}, "grade"),
      el("th", {}, "delta"),
    ),
  );
  for (const row of rows) {
    table.append(
      el("tr", { "data-experiment": String(row.index) },
        el("td", {}, String(row.index)),
        el("td", {}, row.finished_at),
        el("td", { class: "grade" }, row.grade ?? "–"),
        el("td", { class: "delta" }, row.delta ?? ""),
      ),
    );
  }
  const chart = el("div", { class: "progression-chart" });
  for (const row of rows) {
    const bar = el("div", {
      class: "progression-bar",
      "data-experiment": String(row.index),
      title: row.grade ?? "",
    });
    bar.style.height = barWidth(row.grade_num, row.grade_den);
    chart.append(bar);
  }
  return el("div", {}, table, chart);
}
