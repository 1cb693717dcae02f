// @vitest-environment jsdom
//
// End-to-end: boots the real Python service, mounts the real client app in
// jsdom, and drives the full loop through the DOM: login, enter the
// worked-example answers on the Assessment tab, read the Histogram tab and
// compare every displayed value with the CLI's committed golden CSVs, then
// finish two experiments and check the rendered progression delta.

import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync } from "node:fs";
import { createServer } from "node:net";
import { tmpdir } from "node:os";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { App } from "../src/app.js";

const REPO_ROOT = join(dirname(fileURLToPath(import.meta.url)), "..", "..");
const FIXTURE = join(REPO_ROOT, "tests", "fixtures", "worked-example-assessment.json");
const GOLDEN_DOMAIN = join(REPO_ROOT, "tests", "golden", "worked_example_domain.csv");
const GOLDEN_CONTROL = join(REPO_ROOT, "tests", "golden", "worked_example_control.csv");

let server: ChildProcess;
let storeDir: string;
let baseUrl: string;
let app: App;

function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const probe = createServer();
    probe.listen(0, "127.0.0.1", () => {
      const address = probe.address();
      if (address === null || typeof address === "string") {
        reject(new Error("no port"));
        return;
      }
      probe.close(() => resolve(address.port));
    });
  });
}

async function waitFor<T>(
  probe: () => T | null | undefined | false,
  what: string,
  timeoutMs = 15000,
): Promise<T> {
  const deadline = Date.now() + timeoutMs;
  for (;;) {
    const value = probe();
    if (value) return value;
    if (Date.now() > deadline) throw new Error(`timed out waiting for ${what}`);
    await new Promise((resolve) => setTimeout(resolve, 25));
  }
}

// minimal CSV reader; labels contain quoted commas
function parseCsv(path: string): Record<string, string>[] {
  const [headerLine, ...lines] = readFileSync(path, "utf-8").trim().split("\n");
  const header = headerLine.split(",");
  return lines.map((line) => {
    const cells: string[] = [];
    let cell = "";
    let quoted = false;
    for (let i = 0; i < line.length; i++) {
      const ch = line[i];
      if (quoted) {
        if (ch === '"' && line[i + 1] === '"') {
          cell += '"';
          i++;
        } else if (ch === '"') {
          quoted = false;
        } else {
          cell += ch;
        }
      } else if (ch === '"') {
        quoted = true;
      } else if (ch === ",") {
        cells.push(cell);
        cell = "";
      } else {
        cell += ch;
      }
    }
    cells.push(cell);
    return Object.fromEntries(header.map((name, index) => [name, cells[index]]));
  });
}

beforeAll(async () => {
  const port = await freePort();
  baseUrl = `http://127.0.0.1:${port}`;
  storeDir = mkdtempSync(join(tmpdir(), "readiness-e2e-"));
  server = spawn(
    "python3",
    ["-m", "readiness", "serve", "--port", String(port), "--store", storeDir],
    { cwd: REPO_ROOT, stdio: "ignore" },
  );
  const deadline = Date.now() + 30000;
  for (;;) {
    try {
      const response = await fetch(`${baseUrl}/api/catalog`);
      if (response.ok) break;
    } catch {
      // not up yet
    }
    if (Date.now() > deadline) throw new Error("service did not start");
    await new Promise((resolve) => setTimeout(resolve, 100));
  }
}, 60000);

afterAll(() => {
  server?.kill();
  if (storeDir) rmSync(storeDir, { recursive: true, force: true });
});

async function enterScores(scores: Record<string, number>): Promise<void> {
  for (const [leafId, value] of Object.entries(scores)) {
    const select = await waitFor(
      () =>
        document.querySelector<HTMLSelectElement>(`select[data-issue="${leafId}"]`),
      `selector for ${leafId}`,
    );
    select.value = String(value);
    select.dispatchEvent(new Event("change"));
  }
}

function progressIs(text: string): () => boolean {
  return () =>
    document.getElementById("progress-text")?.textContent === text || false;
}

function clickTab(tab: string): void {
  document
    .querySelector<HTMLButtonElement>(`nav.tabs button[data-tab="${tab}"]`)!
    .click();
}

describe("assessment loop end to end", () => {
  it("logs in, scores the worked example, matches the golden histograms, and shows a progression delta", async () => {
    const fixtureScores: Record<string, number> = JSON.parse(
      readFileSync(FIXTURE, "utf-8"),
    ).scores;

    // --- login ---
    app = new App(document.body, {
      apiBase: baseUrl,
      debounceMs: 20,
      confirmPartial: () => true,
    });
    await app.boot();
    const input = await waitFor(
      () => document.querySelector<HTMLInputElement>("#login-user"),
      "login form",
    );
    input.value = "alice";
    document.querySelector<HTMLButtonElement>("#login-create")!.click();

    // --- assessment tab: enter every worked-example answer ---
    await waitFor(
      () => document.querySelectorAll("select[data-issue]").length === 21,
      "assessment form",
    );
    expect(document.getElementById("progress-text")?.textContent).toBe(
      "0/21 answered",
    );
    await enterScores(fixtureScores);
    await waitFor(progressIs("21/21 answered"), "all answers saved");

    // live domain tiles show server values
    const techTile = document.querySelector('[data-domain="tech"] .tile-value');
    expect(techTile?.textContent).toBe("2.60");

    // switching tabs and back must not lose the draft
    clickTab("histogram");
    await waitFor(() => document.querySelectorAll(".bar-pair").length === 6, "bars");
    clickTab("assessment");
    const kept = await waitFor(
      () =>
        document.querySelector<HTMLSelectElement>(
          'select[data-issue="culture.bc_testing.q1"]',
        ),
      "restored form",
    );
    expect(kept.value).toBe("0");

    // --- histogram tab: every displayed number equals the golden CSV ---
    clickTab("histogram");
    await waitFor(() => document.querySelectorAll(".bar-pair").length === 6, "bars");
    for (const row of parseCsv(GOLDEN_DOMAIN)) {
      const pair = document.querySelector(`.bar-pair[data-node="${row.node_id}"]`)!;
      expect(pair.querySelector(".achievement-value")?.textContent).toBe(
        row.achievement,
      );
      expect(pair.querySelector(".priority-value")?.textContent).toBe(row.priority);
    }
    document
      .querySelector<HTMLButtonElement>('button[data-level="control"]')!
      .click();
    await waitFor(
      () => document.querySelectorAll(".bar-pair").length === 21,
      "control bars",
    );
    for (const row of parseCsv(GOLDEN_CONTROL)) {
      const pair = document.querySelector(`.bar-pair[data-node="${row.node_id}"]`)!;
      expect(pair.querySelector(".achievement-value")?.textContent).toBe(
        row.achievement,
      );
      expect(pair.querySelector(".priority-value")?.textContent).toBe(row.priority);
    }

    // --- summarize tab: the four features, all server-rendered ---
    clickTab("summarize");
    await waitFor(() => document.getElementById("finish-experiment"), "summary");
    const featureValue = (name: string) =>
      document.querySelector(`[data-feature="${name}"] .feature-value`)?.textContent;
    expect(featureValue("grade")).toBe("2.86 / 4");
    expect(featureValue("percentage")).toBe("71.39%");
    expect(featureValue("predicate")).toBe("above average");
    expect(
      document.querySelector('[data-advice="weakest areas"] li')?.textContent,
    ).toContain("Stakeholder");

    // --- finish twice and watch the progression delta appear ---
    document.getElementById("finish-experiment")!.click();
    await waitFor(
      () => document.querySelector('#progression tr[data-experiment="1"]'),
      "first experiment row",
    );

    clickTab("assessment");
    await waitFor(
      () => document.querySelectorAll("select[data-issue]").length === 21,
      "fresh form",
    );
    const allFours = Object.fromEntries(
      Object.keys(fixtureScores).map((leafId) => [leafId, 4]),
    );
    await enterScores(allFours);
    await waitFor(progressIs("21/21 answered"), "second run saved");

    clickTab("summarize");
    await waitFor(() => document.getElementById("finish-experiment"), "summary again");
    document.getElementById("finish-experiment")!.click();
    const secondRow = await waitFor(
      () => document.querySelector('#progression tr[data-experiment="2"]'),
      "second experiment row",
    );
    expect(secondRow.querySelector(".grade")?.textContent).toBe("4.00");
    expect(secondRow.querySelector(".delta")?.textContent).toBe("+1.14");
    expect(document.querySelectorAll(".progression-bar").length).toBe(2);
  }, 120000);
});
