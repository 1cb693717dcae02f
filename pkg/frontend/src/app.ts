import { ApiClient, ApiError } from "./api.js";
import { ScoreQueue } from "./queue.js";
import { createState, type ClientState, type TabName } from "./state.js";
import type { SessionSummary } from "./types.js";
import {
  renderAssessment,
  renderHistogram,
  renderLogin,
  renderShell,
  renderSummarize,
  updateBanner,
  updateLiveScores,
} from "./views.js";

export interface AppConfig {
  apiBase: string;
  debounceMs?: number;
  // injectable for tests; window.confirm in the browser
  confirmPartial?: (message: string) => boolean;
}

export class App {
  readonly state: ClientState;
  private api: ApiClient;
  private queue: ScoreQueue;
  private view: HTMLElement | null = null;
  private confirmPartial: (message: string) => boolean;

  constructor(private root: HTMLElement, config: AppConfig) {
    this.state = createState();
    this.api = new ApiClient(config.apiBase);
    this.confirmPartial =
      config.confirmPartial ?? ((message) => window.confirm(message));
    this.queue = new ScoreQueue(
      (scores) => this.sendScores(scores),
      config.debounceMs ?? 300,
      (error) => this.showError(error),
    );
  }

  async boot(): Promise<void> {
    let sessions: { sessions: SessionSummary[] } = { sessions: [] };
    try {
      sessions = await this.api.listSessions();
    } catch (error) {
      // login can still proceed when the listing fails
      this.showError(error);
    }
    renderLogin(this.root, sessions.sessions, {
      onCreate: (user) => void this.login(user),
      onResume: (sessionId) => void this.resume(sessionId),
    });
  }

  private async login(user: string): Promise<void> {
    try {
      const session = await this.api.createSession(user);
      this.state.user = session.user;
      this.state.sessionId = session.session_id;
      await this.enterSession();
    } catch (error) {
      this.showError(error);
    }
  }

  private async resume(sessionId: string): Promise<void> {
    try {
      const session = await this.api.getSession(sessionId);
      this.state.user = session.user;
      this.state.sessionId = session.session_id;
      this.state.draftScores = { ...session.draft_scores };
      await this.enterSession();
    } catch (error) {
      this.showError(error);
    }
  }

  private async enterSession(): Promise<void> {
    this.state.catalog = await this.api.getCatalog();
    this.state.lastReport = await this.api.getLiveReport(this.state.sessionId!);
    this.renderShell();
    await this.showTab("assessment");
  }

  private renderShell(): void {
    this.view = renderShell(this.root, this.state, {
      onTab: (tab) => void this.showTab(tab),
    });
  }

  // tab switches re-render from state, so draft selections are never lost
  async showTab(tab: TabName): Promise<void> {
    if (!this.view) return;
    this.state.activeTab = tab;
    for (const button of this.root.querySelectorAll("nav.tabs .tab")) {
      button.classList.toggle("active", button.getAttribute("data-tab") === tab);
    }
    if (tab === "assessment") {
      renderAssessment(this.view, this.state, (leafId, value) =>
        this.scoreChanged(leafId, value),
      );
    } else if (tab === "histogram") {
      await this.refreshHistogram();
    } else {
      await this.refreshSummarize();
    }
  }

  private scoreChanged(leafId: string, value: number): void {
    this.state.draftScores[leafId] = value;
    this.queue.enqueue(leafId, value);
  }

  private async sendScores(scores: Record<string, number>): Promise<void> {
    const response = await this.api.putScores(this.state.sessionId!, scores);
    this.state.draftScores = { ...response.draft_scores };
    this.state.lastReport = response.report;
    this.state.serverError = null;
    if (this.state.activeTab === "assessment") {
      updateLiveScores(this.state);
    }
  }

  private async refreshHistogram(): Promise<void> {
    if (!this.view) return;
    await this.queue.flush();
    try {
      const data = await this.api.getHistogram(
        this.state.sessionId!,
        this.state.histogramLevel,
      );
      renderHistogram(this.view, this.state, data, (level) => {
        this.state.histogramLevel = level;
        void this.refreshHistogram();
      });
    } catch (error) {
      this.showError(error);
    }
  }

  private async refreshSummarize(): Promise<void> {
    if (!this.view) return;
    await this.queue.flush();
    try {
      this.state.lastReport = await this.api.getLiveReport(this.state.sessionId!);
      const progression = await this.api.getProgression(this.state.sessionId!);
      renderSummarize(this.view, this.state, progression.rows, {
        onFinish: () => void this.finishExperiment(),
      });
    } catch (error) {
      this.showError(error);
    }
  }

  private async finishExperiment(): Promise<void> {
    await this.queue.flush();
    const report = this.state.lastReport;
    let partial = false;
    if (report && !report.complete) {
      const message =
        `Only ${report.scored_leaves} of ${report.total_leaves} issues are ` +
        "answered. Freeze this incomplete draft as a partial experiment?";
      if (!this.confirmPartial(message)) return;
      partial = true;
    }
    try {
      await this.api.finishExperiment(this.state.sessionId!, partial);
      this.state.draftScores = {};
      this.state.serverError = null;
      await this.refreshSummarize();
    } catch (error) {
      this.showError(error);
    }
  }

  private showError(error: unknown): void {
    this.state.serverError =
      error instanceof ApiError
        ? `${error.code}: ${error.message}`
        : "cannot reach the assessment service; your draft is kept locally";
    updateBanner(this.state);
  }
}

export function mount(root: HTMLElement, config: AppConfig): App {
  const app = new App(root, config);
  void app.boot();
  return app;
}
