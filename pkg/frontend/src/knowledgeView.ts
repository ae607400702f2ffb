import { SCORE_LEGEND } from "./colors.js";
import type { NodeDoc } from "./types.js";

/** Definition, quiz and the 4-point self-evaluation for one concept.
 *
 * The quiz answer and explanation start hidden behind a reveal control and
 * hide again whenever another node is shown. Selecting a score invokes the
 * callback exactly once per click; the caller owns the API call.
 */
export class KnowledgeView {
  private current: NodeDoc | null = null;

  constructor(
    private readonly container: HTMLElement,
    private readonly onScore: (node: NodeDoc, score: number) => void,
  ) {}

  show(node: NodeDoc, ownScore: number | null = null): void {
    this.current = node;
    this.container.replaceChildren();
    this.container.classList.add("knowledge-view");

    const heading = document.createElement("h3");
    heading.textContent = node.name;
    this.container.appendChild(heading);

    const definition = document.createElement("p");
    definition.className = "definition";
    definition.textContent = node.definition || "No definition available.";
    this.container.appendChild(definition);

    if (node.quiz) {
      const question = document.createElement("p");
      question.className = "quiz-question";
      question.textContent = node.quiz.question;
      this.container.appendChild(question);

      const solution = document.createElement("div");
      solution.className = "quiz-solution";
      solution.hidden = true;
      const answer = document.createElement("p");
      answer.className = "quiz-answer";
      answer.textContent = node.quiz.answer;
      const explanation = document.createElement("p");
      explanation.className = "quiz-explanation";
      explanation.textContent = node.quiz.explanation;
      solution.append(answer, explanation);

      const reveal = document.createElement("button");
      reveal.className = "quiz-reveal";
      reveal.textContent = "Show answer";
      reveal.addEventListener("click", () => {
        solution.hidden = false;
        reveal.hidden = true;
      });
      this.container.append(reveal, solution);
    }

    const scoring = document.createElement("div");
    scoring.className = "scoring";
    for (const entry of SCORE_LEGEND) {
      const button = document.createElement("button");
      button.className = "score-button";
      button.dataset.score = String(entry.score);
      button.style.borderColor = entry.color;
      button.textContent = `${entry.score} ${entry.label}`;
      button.classList.toggle("selected", ownScore === entry.score);
      button.addEventListener("click", () => {
        for (const sibling of scoring.querySelectorAll(".score-button")) {
          sibling.classList.toggle("selected", sibling === button);
        }
        this.onScore(node, entry.score);
      });
      scoring.appendChild(button);
    }
    this.container.appendChild(scoring);
  }

  get shownNode(): NodeDoc | null {
    return this.current;
  }
}
