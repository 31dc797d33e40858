"""Figure rendering for the report artifacts.

Every plotting function writes a PNG next to the delimited data file it
illustrates. The Agg backend keeps rendering headless and repeatable.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def popularity_bars(report, path, title):
    """Horizontal bar chart of an n-gram or lexicon popularity report."""
    labels = [" ".join(gram) for gram, _ in report.entries]
    counts = [count for _, count in report.entries]
    fig, ax = plt.subplots(figsize=(8, max(3, 0.25 * len(labels) + 1)))
    y = range(len(labels))[::-1]
    ax.barh(list(y), counts, color="steelblue")
    ax.set_yticks(list(y))
    ax.set_yticklabels(labels, fontsize=7)
    ax.set_xlabel("count")
    ax.set_title(title)
    _save(fig, path)


def sentiment_pie(distribution, path):
    """Class share pie for the three-way sentiment distribution."""
    sizes = [distribution.positive_pct, distribution.negative_pct,
             distribution.neutral_pct]
    labels = [f"positive {sizes[0]:.1f}%", f"negative {sizes[1]:.1f}%",
              f"neutral {sizes[2]:.1f}%"]
    fig, ax = plt.subplots(figsize=(5, 5))
    if sum(sizes) > 0:
        ax.pie(sizes, labels=labels, colors=["seagreen", "firebrick", "gray"])
    ax.set_title(f"sentiment classes over {distribution.count} tweets")
    _save(fig, path)


def training_curves(logs, path):
    """Loss and accuracy per epoch for train and validation splits."""
    epochs = [log.epoch for log in logs]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
    ax1.plot(epochs, [log.train_loss for log in logs], label="train loss")
    ax1.plot(epochs, [log.val_loss for log in logs], label="val loss")
    ax1.set_xlabel("epoch")
    ax1.set_ylabel("loss")
    ax1.legend()
    ax2.plot(epochs, [log.train_acc for log in logs], label="train acc")
    ax2.plot(epochs, [log.val_acc for log in logs], label="val acc")
    ax2.set_xlabel("epoch")
    ax2.set_ylabel("accuracy (%)")
    ax2.legend()
    _save(fig, path)


def confusion_heatmap(cm, path):
    """2x2 actual-vs-predicted matrix with cell counts."""
    grid = [[cm.tp, cm.fp], [cm.fn, cm.tn]]
    fig, ax = plt.subplots(figsize=(4, 4))
    ax.imshow(grid, cmap="Blues")
    for i in range(2):
        for j in range(2):
            ax.text(j, i, str(grid[i][j]), ha="center", va="center")
    ax.set_xticks([0, 1])
    ax.set_xticklabels(["positive", "negative"])
    ax.set_yticks([0, 1])
    ax.set_yticklabels(["positive", "negative"])
    ax.set_xlabel("predicted")
    ax.set_ylabel("actual")
    _save(fig, path)
