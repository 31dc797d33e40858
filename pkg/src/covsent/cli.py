"""Command-line pipeline: ingest, preprocess, ngram, sentiment, embed,
train, evaluate, and the end-to-end `pipeline` chaining them all.

Each stage reads its input artifact, writes delimited output into the
output directory and, where a figure makes sense, renders a PNG next to
it. Exit codes: 0 success, 1 runtime failure, 2 usage/config error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from importlib import resources

import numpy as np

from . import corpus, embedding, lstm, metrics, ngram, plots, preprocess, sentiment
from .config import ConfigError, PipelineConfig, load_config, validate
from .preprocess import CleanTweet

logger = logging.getLogger("covsent")


# ---------------------------------------------------------------- artifacts


def write_tokens_csv(path, tweets) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["tweet_id", "tokens"])
        for tweet in tweets:
            writer.writerow([tweet.tweet_id, " ".join(tweet.tokens)])


def read_tokens_csv(path) -> list[CleanTweet]:
    tweets = []
    with open(path, newline="", encoding="utf-8") as handle:
        for row in csv.DictReader(handle):
            tokens = tuple(row["tokens"].split()) if row["tokens"] else ()
            tweets.append(CleanTweet(tweet_id=int(row["tweet_id"]), tokens=tokens))
    return tweets


def write_report_csv(path, report) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["rank", "ngram", "count"])
        for rank, (gram, count) in enumerate(report.entries, start=1):
            writer.writerow([rank, " ".join(gram), count])


def write_scored_csv(path, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["tweet_id", "pos", "neg", "neu", "compound", "label"])
        for tweet_id, scores, label in rows:
            writer.writerow(
                [tweet_id, f"{scores.pos:.6f}", f"{scores.neg:.6f}",
                 f"{scores.neu:.6f}", f"{scores.compound:.6f}", label]
            )


def read_labels_csv(path) -> dict[int, float]:
    labels = {}
    with open(path, newline="", encoding="utf-8") as handle:
        for row in csv.DictReader(handle):
            labels[int(row["tweet_id"])] = float(row["label"])
    return labels


def write_epoch_log_csv(path, logs) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["epoch", "train_loss", "train_acc", "val_loss", "val_acc"])
        for log in logs:
            writer.writerow(
                [log.epoch, f"{log.train_loss:.6f}", f"{log.train_acc:.4f}",
                 f"{log.val_loss:.6f}", f"{log.val_acc:.4f}"]
            )


def load_token_list(path, default_resource) -> list[str]:
    """Keyword-list file: one token per line, '#' comments ignored."""
    if path is None:
        text = resources.files("covsent.data").joinpath(default_resource).read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    return [
        line.strip().lower()
        for line in text.splitlines()
        if line.strip() and not line.strip().startswith("#")
    ]


# ------------------------------------------------------------------ stages


def stage_ingest(cfg: PipelineConfig, out_path) -> None:
    result = corpus.load_csv(cfg.input_csv)
    english = corpus.filter_english(result.records)
    unique = corpus.dedupe(english)
    corpus.write_csv(unique, out_path)
    print(
        f"ingest: {len(result.records)} rows loaded, {result.skipped} skipped, "
        f"{len(english)} english, {len(unique)} after dedupe -> {out_path}"
    )


def stage_preprocess(cfg: PipelineConfig, in_path, out_path) -> None:
    stopwords = preprocess.load_stopwords(cfg.stopwords)
    records = corpus.load_csv(in_path).records
    tweets = [preprocess.preprocess(r, stopwords) for r in records]
    write_tokens_csv(out_path, tweets)
    print(f"preprocess: {len(tweets)} tweets tokenized -> {out_path}")


def stage_ngram(cfg: PipelineConfig, in_path, out_path, n, k, lexicon_path=None) -> None:
    tweets = read_tokens_csv(in_path)
    if lexicon_path == "":
        lexicon_path = None
    if n == 0:  # lexicon-frequency mode (keyword popularity report)
        # corpus tokens are stemmed, so match against stemmed keywords
        lexicon = {preprocess.stem(t) for t in load_token_list(lexicon_path, "topic_lexicon.txt")}
        report = ngram.lexicon_frequency(tweets, lexicon)
        title = "topic keyword frequency"
    else:
        counts = ngram.count_ngrams(tweets, n)
        report = ngram.top_k(counts, k)
        title = f"top {k} {['', 'unigrams', 'bigrams', 'trigrams'][n]}"
    write_report_csv(out_path, report)
    fig_path = os.path.splitext(out_path)[0] + ".png"
    plots.popularity_bars(report, fig_path, title)
    print(f"ngram: {len(report.entries)} entries -> {out_path} (+{fig_path})")


def stage_sentiment(cfg: PipelineConfig, in_path, out_path) -> None:
    tweets = read_tokens_csv(in_path)
    lexicon = sentiment.load_lexicon(cfg.lexicon)
    rows = []
    labels = []
    for tweet in tweets:
        scores = sentiment.score(tweet, lexicon, alpha=cfg.alpha)
        label = sentiment.classify(scores.compound)
        rows.append((tweet.tweet_id, scores, label))
        labels.append(label)
    write_scored_csv(out_path, rows)
    dist = sentiment.class_distribution(labels)
    dist_path = os.path.join(os.path.dirname(out_path) or ".", "distribution.csv")
    with open(dist_path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["class", "percent", "count"])
        n = dist.count
        writer.writerow(["positive", f"{dist.positive_pct:.4f}", round(dist.positive_pct * n / 100)])
        writer.writerow(["negative", f"{dist.negative_pct:.4f}", round(dist.negative_pct * n / 100)])
        writer.writerow(["neutral", f"{dist.neutral_pct:.4f}", round(dist.neutral_pct * n / 100)])
    fig_path = os.path.splitext(dist_path)[0] + ".png"
    plots.sentiment_pie(dist, fig_path)
    print(
        f"sentiment: {len(rows)} tweets scored ({dist.positive_pct:.1f}% pos, "
        f"{dist.negative_pct:.1f}% neg, {dist.neutral_pct:.1f}% neu) -> {out_path}"
    )


def stage_embed(cfg: PipelineConfig, in_path, out_path) -> None:
    tweets = read_tokens_csv(in_path)
    vocab = embedding.build_vocab(tweets, min_count=cfg.min_count)
    result = embedding.train_skipgram(
        tweets, vocab, dim=cfg.dim, window=cfg.window, negatives=cfg.negatives,
        epochs=cfg.embed_epochs, seed=cfg.embed_seed, lr=cfg.embed_lr,
    )
    embedding.save_embeddings(out_path, vocab, result.matrix)
    print(
        f"embed: |V|={len(vocab)}, dim={cfg.dim}, "
        f"final loss {result.epoch_losses[-1]:.4f} -> {out_path}"
    )


def _embed_dataset(tweets, vocab, matrix, max_len):
    sequences = np.zeros((len(tweets), max_len, matrix.dim))
    lengths = np.zeros(len(tweets), dtype=int)
    for i, tweet in enumerate(tweets):
        sequences[i], lengths[i] = embedding.embed_sequence(
            tweet.tokens, vocab, matrix, max_len
        )
    return sequences, lengths


def stage_train(cfg: PipelineConfig, tokens_path, scores_path, emb_path, outdir) -> None:
    tweets = read_tokens_csv(tokens_path)
    labels_by_id = read_labels_csv(scores_path)
    vocab, matrix = embedding.load_embeddings(emb_path)

    # neutral (0.5) tweets are excluded from supervised training
    usable = [t for t in tweets if labels_by_id.get(t.tweet_id) in (0.0, 1.0)]
    labels = np.array([labels_by_id[t.tweet_id] for t in usable])
    sequences, lengths = _embed_dataset(usable, vocab, matrix, cfg.max_len)

    split_out: dict = {}
    params, logs = lstm.train(
        sequences, lengths, labels, cfg.train_config(), split_out=split_out
    )
    ckpt_path = os.path.join(outdir, "checkpoint.bin")
    meta = {"dim": matrix.dim, "hidden": cfg.hidden, "max_len": cfg.max_len,
            "dense_sizes": list(lstm.DENSE_SIZES)}
    lstm.save_checkpoint(ckpt_path, params, meta)
    log_path = os.path.join(outdir, "training_log.csv")
    write_epoch_log_csv(log_path, logs)
    plots.training_curves(logs, os.path.join(outdir, "training_curves.png"))

    val_path = os.path.join(outdir, "val_set.csv")
    with open(val_path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["tweet_id", "tokens", "label"])
        for i in split_out["val_idx"]:
            tweet = usable[i]
            writer.writerow([tweet.tweet_id, " ".join(tweet.tokens), labels[i]])
    print(
        f"train: {len(usable)} labeled tweets, {count_params_str(params)}, "
        f"final val acc {logs[-1].val_acc:.2f}% -> {ckpt_path}"
    )


def count_params_str(params) -> str:
    return f"{lstm.count_parameters(params)} parameters"


def stage_evaluate(cfg: PipelineConfig, model_path, emb_path, in_path, out_path) -> None:
    params, meta = lstm.load_checkpoint(model_path)
    vocab, matrix = embedding.load_embeddings(emb_path)
    max_len = int(meta.get("max_len", cfg.max_len))

    tweets = []
    actual = []
    with open(in_path, newline="", encoding="utf-8") as handle:
        for row in csv.DictReader(handle):
            tokens = tuple(row["tokens"].split()) if row["tokens"] else ()
            tweets.append(CleanTweet(tweet_id=int(row["tweet_id"]), tokens=tokens))
            actual.append(float(row["label"]))
    sequences, lengths = _embed_dataset(tweets, vocab, matrix, max_len)
    predicted = [
        lstm.predict(params, sequences[i], lengths[i]) for i in range(len(tweets))
    ]
    cm = metrics.confusion(zip(actual, predicted))
    rep = metrics.report(cm)
    acc = metrics.accuracy(cm)

    payload = {
        "confusion_matrix": {"tp": cm.tp, "fp": cm.fp, "fn": cm.fn, "tn": cm.tn},
        "classes": {
            "positive": {
                "precision": rep.positive.precision, "recall": rep.positive.recall,
                "f1": rep.positive.f1, "support": rep.positive.support,
            },
            "negative": {
                "precision": rep.negative.precision, "recall": rep.negative.recall,
                "f1": rep.negative.f1, "support": rep.negative.support,
            },
        },
        "weighted": {
            "precision": rep.weighted_precision, "recall": rep.weighted_recall,
            "f1": rep.weighted_f1,
        },
        "accuracy": acc,
        "total": cm.total,
    }
    with open(out_path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=2)
        handle.write("\n")
    fig_path = os.path.splitext(out_path)[0] + "_confusion.png"
    plots.confusion_heatmap(cm, fig_path)
    print(f"evaluate: accuracy {acc:.4f} on {cm.total} samples -> {out_path}")


def stage_pipeline(cfg: PipelineConfig) -> None:
    outdir = cfg.outdir
    os.makedirs(outdir, exist_ok=True)
    corpus_path = os.path.join(outdir, "corpus.csv")
    tokens_path = os.path.join(outdir, "tokens.csv")
    scored_path = os.path.join(outdir, "scored.csv")
    emb_path = os.path.join(outdir, "embeddings.txt")

    stage_ingest(cfg, corpus_path)
    stage_preprocess(cfg, corpus_path, tokens_path)
    stage_ngram(cfg, tokens_path, os.path.join(outdir, "lexicon_freq.csv"),
                n=0, k=cfg.top_k, lexicon_path=cfg.topic_lexicon)
    for n in (1, 2, 3):
        stage_ngram(cfg, tokens_path, os.path.join(outdir, f"ngram_{n}.csv"),
                    n=n, k=cfg.top_k)
    stage_sentiment(cfg, tokens_path, scored_path)
    stage_embed(cfg, tokens_path, emb_path)
    stage_train(cfg, tokens_path, scored_path, emb_path, outdir)
    stage_evaluate(cfg, os.path.join(outdir, "checkpoint.bin"), emb_path,
                   os.path.join(outdir, "val_set.csv"),
                   os.path.join(outdir, "report.json"))
    print(f"pipeline: all stages complete -> {outdir}")


# -------------------------------------------------------------------- CLI


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI config file")
    common.add_argument("--outdir", help="output directory")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="covsent",
        description="Tweet corpus analytics and neural sentiment pipeline",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_parser(name, help):
        return sub.add_parser(name, help=help, parents=[common])

    p = add_parser("ingest", help="load, filter and dedupe the corpus CSV")
    p.add_argument("--in", dest="in_path", help="raw corpus CSV")
    p.add_argument("--out", dest="out_path", help="cleaned corpus CSV")

    p = add_parser("preprocess", help="clean, tokenize, stem")
    p.add_argument("--stopwords", help="stopword file (one word per line)")
    p.add_argument("--in", dest="in_path", help="corpus CSV")
    p.add_argument("--out", dest="out_path", help="tokens CSV")

    p = add_parser("ngram", help="popularity report for n-grams")
    p.add_argument("--n", type=int, choices=(1, 2, 3), help="n-gram order")
    p.add_argument("--top", type=int, help="report length")
    p.add_argument("--lexicon", help="keyword list: report keyword frequencies instead")
    p.add_argument("--in", dest="in_path", help="tokens CSV")
    p.add_argument("--out", dest="out_path", help="report CSV")

    p = add_parser("sentiment", help="valence scoring and three-way rating")
    p.add_argument("--lexicon", help="token<TAB>valence lexicon file")
    p.add_argument("--in", dest="in_path", help="tokens CSV")
    p.add_argument("--out", dest="out_path", help="scored CSV")

    p = add_parser("embed", help="train skip-gram embeddings")
    p.add_argument("--in", dest="in_path", help="tokens CSV")
    p.add_argument("--out", dest="out_path", help="embeddings file")
    p.add_argument("--dim", type=int)
    p.add_argument("--seed", type=int)

    p = add_parser("train", help="train the LSTM classifier")
    p.add_argument("--in", dest="in_path", help="tokens CSV")
    p.add_argument("--scores", help="scored CSV with labels")
    p.add_argument("--embeddings", help="embeddings file")
    p.add_argument("--epochs", type=int)
    p.add_argument("--seed", type=int)

    p = add_parser("evaluate", help="confusion matrix and report")
    p.add_argument("--model", help="checkpoint file")
    p.add_argument("--embeddings", help="embeddings file")
    p.add_argument("--in", dest="in_path", help="labeled tokens CSV")
    p.add_argument("--out", dest="out_path", help="report JSON")

    p = add_parser("pipeline", help="run every stage in order")
    p.add_argument("--in", dest="in_path", help="raw corpus CSV")

    return parser


def _resolve_config(args) -> PipelineConfig:
    cfg = load_config(args.config) if args.config else PipelineConfig()
    if args.outdir:
        cfg.outdir = args.outdir
    in_path = getattr(args, "in_path", None)
    if in_path and args.command in ("ingest", "pipeline"):
        cfg.input_csv = in_path
    for flag, attr in (
        ("stopwords", "stopwords"), ("lexicon", "lexicon"), ("dim", "dim"),
        ("n", "ngram_n"), ("top", "top_k"),
    ):
        value = getattr(args, flag, None)
        if value is not None:
            setattr(cfg, attr, value)
    if getattr(args, "seed", None) is not None:
        if args.command == "embed":
            cfg.embed_seed = args.seed
        else:
            cfg.seed = args.seed
    if getattr(args, "epochs", None) is not None:
        cfg.epochs = args.epochs
    return cfg


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        cfg = _resolve_config(args)
        validate(cfg, require_input=args.command in ("ingest", "pipeline"))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    outdir = cfg.outdir
    os.makedirs(outdir, exist_ok=True)
    join = lambda name: os.path.join(outdir, name)  # noqa: E731
    try:
        if args.command == "ingest":
            stage_ingest(cfg, args.out_path or join("corpus.csv"))
        elif args.command == "preprocess":
            stage_preprocess(cfg, args.in_path or join("corpus.csv"),
                             args.out_path or join("tokens.csv"))
        elif args.command == "ngram":
            if args.lexicon is not None or args.n is None:
                n = 0 if args.n is None and args.lexicon is not None else (args.n or cfg.ngram_n)
            else:
                n = args.n
            default_out = "lexicon_freq.csv" if n == 0 else f"ngram_{n}.csv"
            stage_ngram(cfg, args.in_path or join("tokens.csv"),
                        args.out_path or join(default_out),
                        n=n, k=args.top or cfg.top_k, lexicon_path=args.lexicon)
        elif args.command == "sentiment":
            stage_sentiment(cfg, args.in_path or join("tokens.csv"),
                            args.out_path or join("scored.csv"))
        elif args.command == "embed":
            stage_embed(cfg, args.in_path or join("tokens.csv"),
                        args.out_path or join("embeddings.txt"))
        elif args.command == "train":
            stage_train(cfg, args.in_path or join("tokens.csv"),
                        args.scores or join("scored.csv"),
                        args.embeddings or join("embeddings.txt"), outdir)
        elif args.command == "evaluate":
            stage_evaluate(cfg, args.model or join("checkpoint.bin"),
                           args.embeddings or join("embeddings.txt"),
                           args.in_path or join("val_set.csv"),
                           args.out_path or join("report.json"))
        elif args.command == "pipeline":
            stage_pipeline(cfg)
    except (corpus.CorpusError, embedding.VocabError, ValueError,
            FloatingPointError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
