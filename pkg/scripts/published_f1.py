"""Recompute F1 from the benchmark precision and recall of each method and task.

    python scripts/published_f1.py
"""

from mappergpt.evaluate import f1_score

TASKS = {
    "all tasks": [("lexmatch", 0.340, 0.210, 0.881), ("logmap", 0.527, 0.458, 0.619), ("gpt3", 0.490, 0.500, 0.481), ("gpt4", 0.672, 0.601, 0.762)],
    "FBbt-ZFA": [("lexmatch", 0.349, 0.219, 0.847), ("logmap", 0.486, 0.404, 0.611), ("gpt3", 0.511, 0.557, 0.472), ("gpt4", 0.644, 0.543, 0.792)],
    "FBbt-WBbt": [("lexmatch", 0.257, 0.152, 0.854), ("logmap", 0.520, 0.441, 0.634), ("gpt3", 0.427, 0.471, 0.390), ("gpt4", 0.660, 0.585, 0.756)],
    "HsapDv-MmusDv": [("lexmatch", 0.606, 0.455, 0.909), ("logmap", 0.531, 0.405, 0.773), ("gpt3", 0.556, 0.714, 0.455), ("gpt4", 0.647, 0.917, 0.500)],
    "MONDO-NCIT renal": [("lexmatch", 0.352, 0.214, 1.000), ("logmap", 0.721, 0.611, 0.880), ("gpt3", 0.486, 0.378, 0.680), ("gpt4", 0.793, 0.697, 0.920)],
}
TOLERANCE = 0.002


def main():
    worst = 0.0
    print(f"{'task':<18}{'method':<10}{'P':>7}{'R':>7}{'F1 listed':>12}{'F1 recomputed':>15}")
    for task, rows in TASKS.items():
        for method, f1, p, r in rows:
            got = f1_score(p, r)
            worst = max(worst, abs(got - f1))
            print(f"{task:<18}{method:<10}{p:>7.3f}{r:>7.3f}{f1:>12.3f}{got:>15.4f}")
    print(f"\nlargest deviation {worst:.4f} (tolerance {TOLERANCE})")
    raise SystemExit(0 if worst <= TOLERANCE else 1)


if __name__ == "__main__":
    main()
