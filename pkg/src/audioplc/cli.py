"""Command-line workflows: train, simulate-loss, conceal, evaluate.

Every command honors --seed and is reproducible byte-for-byte.  Audio is
mono 16-bit PCM WAV; masks travel as sidecar text files; models as .plcm
checkpoints.  A built-in synthetic corpus (--synthetic sine) lets every
workflow run without external data.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np

from .checkpoint import load_checkpoint, save_checkpoint
from .conceal import StreamingConcealer, conceal_bidirectional, conceal_sequence
from .evaluate import (
    DEFAULT_PAIRS,
    STRATEGIES,
    EvalGridSpec,
    evaluate_tracks,
    render_csv,
    render_table,
)
from .figures import render_report_figure
from .framing import AudioSignal, FrameSequence, frame_signal, unframe
from .generator import GeneratorConfig
from .baselines import linear_interp, zero_fill
from .lossmodel import (
    MarkovLossModel,
    apply_mask,
    read_mask_file,
    sample_mask,
    write_mask_file,
)
from .synth import sine_corpus
from .training import TrainConfig, train
from .wavio import read_wav, write_wav


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(",") if x)


def _pair_list(text: str) -> tuple[tuple[float, float], ...]:
    pairs = []
    for chunk in text.split(","):
        if not chunk:
            continue
        p_l, p_n = chunk.split(":")
        pairs.append((float(p_l), float(p_n)))
    return tuple(pairs)


def _add_corpus_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--corpus", type=Path, help="directory of mono 16-bit WAV files")
    p.add_argument("--synthetic", choices=["sine"],
                   help="use the built-in deterministic sine corpus")
    p.add_argument("--tracks", type=int, default=4,
                   help="synthetic corpus: number of tracks (default 4)")
    p.add_argument("--duration", type=float, default=2.0,
                   help="synthetic corpus: seconds per track (default 2.0)")


def _load_corpus(args, extra_wavs: list[Path] | None = None) -> list[AudioSignal]:
    tracks: list[AudioSignal] = []
    if args.corpus is not None:
        paths = sorted(Path(args.corpus).glob("*.wav"))
        if not paths:
            raise FileNotFoundError(f"no .wav files in {args.corpus}")
        tracks.extend(read_wav(p) for p in paths)
    for p in extra_wavs or []:
        tracks.append(read_wav(p))
    if args.synthetic:
        tracks.extend(
            sine_corpus(args.tracks, args.duration,
                        sample_rate=args.sample_rate, seed=args.seed)
        )
    if not tracks:
        raise ValueError("no input audio: pass --corpus, --synthetic or WAV files")
    for t in tracks:
        if t.sample_rate != args.sample_rate:
            raise ValueError(
                f"track sample rate {t.sample_rate} != configured "
                f"{args.sample_rate}; resample explicitly, the engine will not"
            )
    return tracks


# -- train ---------------------------------------------------------------------


def cmd_train(args) -> int:
    corpus = _load_corpus(args)
    dense = args.dense if args.dense else (256, args.frame_len)
    gen_cfg = GeneratorConfig(
        frame_len=args.frame_len,
        lstm_units=args.units,
        dense_units=dense,
        sample_rate=args.sample_rate,
    )
    train_cfg = TrainConfig(
        epochs_plain=args.epochs_plain,
        epochs_stress=args.epochs_stress,
        lr_plain=args.lr_plain,
        lr_stress=args.lr_stress,
        lr_decay=args.lr_decay,
        dropout_rate=args.dropout,
        stress_depth=args.stress_depth,
        segment_seconds=args.segment_seconds,
        rng_seed=args.seed,
    )

    jobs = [("forward", corpus, args.out)]
    if args.train_backward:
        reversed_corpus = [
            AudioSignal(t.samples[::-1].copy(), t.sample_rate) for t in corpus
        ]
        out_bwd = args.out_bwd or args.out.with_stem(args.out.stem + "_bwd")
        jobs.append(("backward", reversed_corpus, out_bwd))

    for direction, tracks, out_path in jobs:
        def report(epoch, phase, loss, _dir=direction):
            print(f"[{_dir}] epoch {epoch:3d} ({phase:6s}) loss {loss:.6f}")

        params, history = train(tracks, gen_cfg, train_cfg, progress=report)
        save_checkpoint(out_path, params, gen_cfg.frame_len, gen_cfg.sample_rate)
        log = {
            "direction": direction,
            "seed": args.seed,
            "generator": asdict(gen_cfg),
            "training": asdict(train_cfg),
            "epochs": [{"phase": h.phase, "loss": h.loss} for h in history],
        }
        log_path = out_path.with_suffix(".log.json")
        log_path.write_text(json.dumps(log, indent=2, sort_keys=True) + "\n")
        print(f"[{direction}] wrote {out_path} and {log_path}")
    return 0


# -- simulate-loss ---------------------------------------------------------------


def cmd_simulate_loss(args) -> int:
    signal = read_wav(args.wav)
    seq = frame_signal(signal, args.frame_len)
    model = MarkovLossModel(p_loss=args.p_loss, p_noloss=args.p_noloss)
    mask = sample_mask(model, seq.num_frames, args.seed)
    lossy = apply_mask(seq, mask)
    write_wav(args.out, unframe(lossy))
    write_mask_file(args.mask_out, mask, model=model, seed=args.seed)
    dropped = int(np.sum(mask == 0))
    print(
        f"wrote {args.out} and {args.mask_out}: "
        f"{dropped}/{seq.num_frames} frames dropped "
        f"({100.0 * dropped / seq.num_frames:.2f}%)"
    )
    return 0


# -- conceal ---------------------------------------------------------------------


def cmd_conceal(args) -> int:
    signal = read_wav(args.wav)
    seq = frame_signal(signal, args.frame_len)
    masks = read_mask_file(args.mask)
    if len(masks) != 1:
        raise ValueError(f"{args.mask}: expected exactly one mask line, got {len(masks)}")
    mask = masks[0]
    if len(mask) != seq.num_frames:
        raise ValueError(
            f"mask length {len(mask)} != {seq.num_frames} frames of {args.wav}"
        )
    # Lost frames must arrive zeroed; enforce rather than trust the input.
    lossy = apply_mask(seq, mask)

    if args.mode == "zero":
        fixed = zero_fill(lossy, mask).frames
    elif args.mode == "interp":
        fixed = linear_interp(lossy, mask).frames
    elif args.mode in ("forward", "bidir"):
        if args.model is None:
            raise ValueError(f"--mode {args.mode} needs --model")
        params, meta = load_checkpoint(args.model)
        if meta["frame_len"] != args.frame_len:
            raise ValueError(
                f"model frame_len {meta['frame_len']} != --frame-len {args.frame_len}"
            )
        if args.mode == "forward":
            if args.stream:
                stream = StreamingConcealer(params)
                fixed = np.asarray(
                    [stream.step(f, int(m)) for f, m in zip(lossy.frames, mask)]
                )
            else:
                fixed = conceal_sequence(params, lossy.frames, mask)
        else:
            if args.model_bwd is None:
                raise ValueError("--mode bidir needs --model-bwd")
            params_bwd, _ = load_checkpoint(args.model_bwd)
            fixed = conceal_bidirectional(params, params_bwd, lossy.frames, mask)
    else:
        raise ValueError(f"unknown mode {args.mode!r}")

    out_seq = FrameSequence(frames=fixed, sample_rate=seq.sample_rate, length=seq.length)
    write_wav(args.out, unframe(out_seq))
    print(f"wrote {args.out} (mode {args.mode})")
    return 0


# -- evaluate --------------------------------------------------------------------


def cmd_evaluate(args) -> int:
    tracks = _load_corpus(args, extra_wavs=args.wavs)
    strategies = tuple(args.strategies.split(","))
    model_fwd = model_bwd = None
    if args.model is not None:
        model_fwd, _ = load_checkpoint(args.model)
    if args.model_bwd is not None:
        model_bwd, _ = load_checkpoint(args.model_bwd)
    grid = EvalGridSpec(
        pairs=args.pairs,
        strategies=strategies,
        trials=args.trials,
        base_seed=args.seed,
        frame_len=args.frame_len,
    )
    rows = evaluate_tracks(tracks, grid, model_fwd, model_bwd)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / "report.csv"
    table_path = out_dir / "report.txt"
    fig_path = out_dir / "report.png"
    csv_path.write_text(render_csv(rows))
    table = render_table(rows)
    table_path.write_text(table)
    render_report_figure(rows, fig_path)
    print(table, end="")
    print(f"wrote {csv_path}, {table_path}, {fig_path}")
    return 0


# -- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="audioplc",
        description="Packet-loss concealment engine for streamed audio",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = dict(formatter_class=argparse.ArgumentDefaultsHelpFormatter)

    p = sub.add_parser("train", help="train the frame predictor", **common)
    _add_corpus_args(p)
    p.add_argument("--out", type=Path, default=Path("model.plcm"))
    p.add_argument("--train-backward", action="store_true",
                   help="also train a backward model on time-reversed audio")
    p.add_argument("--out-bwd", type=Path, default=None)
    p.add_argument("--units", type=_int_list, default=(768, 768),
                   help="LSTM units per layer, comma separated")
    p.add_argument("--dense", type=_int_list, default=None,
                   help="dense head widths (default: 256,<frame-len>)")
    p.add_argument("--frame-len", type=int, default=100)
    p.add_argument("--sample-rate", type=int, default=16000)
    p.add_argument("--epochs-plain", type=int, default=80)
    p.add_argument("--epochs-stress", type=int, default=40)
    p.add_argument("--lr-plain", type=float, default=0.0045)
    p.add_argument("--lr-stress", type=float, default=0.003)
    p.add_argument("--lr-decay", type=float, default=0.0015)
    p.add_argument("--dropout", type=float, default=0.5)
    p.add_argument("--stress-depth", type=int, default=3)
    p.add_argument("--segment-seconds", type=float, default=20.0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("simulate-loss", help="corrupt a WAV with Markov losses",
                       **common)
    p.add_argument("wav", type=Path)
    p.add_argument("--p-loss", type=float, required=True,
                   help="probability of staying in the loss state")
    p.add_argument("--p-noloss", type=float, required=True,
                   help="probability of staying in the no-loss state")
    p.add_argument("--frame-len", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, default=Path("lossy.wav"))
    p.add_argument("--mask-out", type=Path, default=Path("mask.txt"))
    p.set_defaults(func=cmd_simulate_loss)

    p = sub.add_parser("conceal", help="fill lost frames of a corrupted WAV",
                       **common)
    p.add_argument("wav", type=Path)
    p.add_argument("--mask", type=Path, required=True)
    p.add_argument("--mode", choices=["zero", "interp", "forward", "bidir"],
                   default="forward")
    p.add_argument("--model", type=Path, default=None)
    p.add_argument("--model-bwd", type=Path, default=None)
    p.add_argument("--stream", action="store_true",
                   help="force the frame-by-frame stateful path (forward mode)")
    p.add_argument("--frame-len", type=int, default=100)
    p.add_argument("--out", type=Path, default=Path("fixed.wav"))
    p.set_defaults(func=cmd_conceal)

    p = sub.add_parser("evaluate", help="sweep loss regimes and score strategies",
                       **common)
    p.add_argument("wavs", nargs="*", type=Path, help="individual WAV files")
    _add_corpus_args(p)
    p.add_argument("--model", type=Path, default=None)
    p.add_argument("--model-bwd", type=Path, default=None)
    p.add_argument("--pairs", type=_pair_list, default=DEFAULT_PAIRS,
                   help="p_L:p_N pairs, comma separated (default: the 9-regime grid)")
    p.add_argument("--strategies", default=",".join(STRATEGIES))
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--frame-len", type=int, default=100)
    p.add_argument("--sample-rate", type=int, default=16000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, default=Path("report"),
                   help="output directory for report.csv/.txt/.png")
    p.set_defaults(func=cmd_evaluate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
