"""Command-line entry point: ``resetword {gen,analyze,synth,oracle,experiment}``."""

from __future__ import annotations

import argparse
import statistics
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import _kernels
from .classes import best_cluster_letter, detect_quasi_eulerian, letter_clusters, quasi_eulerian_reset, quasi_one_cluster_reset
from .codes import (
    PrefixCode,
    as_decoder,
    decoder_from_code,
    decoder_reset,
    gen_cerny,
    gen_eulerian,
    gen_random_decoder,
    gen_random_dfa,
    gen_xnk,
)
from .core import (
    Automaton,
    format_word,
    from_text,
    incompressible_pair,
    is_strongly_connected,
    is_synchronizing,
    rank_of_word,
    sink_component,
    to_dot,
    to_text,
)
from .errors import ClassMismatchError, PreconditionError, ResetWordError, ValidationError
from .oracle import MAX_ORACLE_STATES, exact_pair_threshold, exact_reset_threshold
from .synthesis import extension_reset, greedy_compression


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


class Output:
    """Collects ``key=value`` lines, or aligned ``key: value`` lines with ``--pretty``."""

    def __init__(self, pretty: bool):
        self.pretty = pretty
        self.lines: list[str] = []

    def kv(self, key, value):
        if isinstance(value, bool):
            value = ("yes" if value else "no") if self.pretty else str(value).lower()
        elif isinstance(value, Fraction):
            value = str(value)
        self.lines.append(f"{key}: {value}" if self.pretty else f"{key}={value}")

    def word(self, key, w):
        self.kv(key, format_word(w, self.pretty))

    def table(self, columns, rows):
        if self.pretty:
            cells = [list(columns)] + [[str(c) for c in r] for r in rows]
            widths = [max(len(r[i]) for r in cells) for i in range(len(columns))]
            for r in cells:
                self.lines.append("  ".join(c.rjust(w) for c, w in zip(r, widths)))
        else:
            self.lines.append("columns=" + " ".join(columns))
            self.lines.extend("row=" + " ".join(str(c) for c in r) for r in rows)

    def text(self, s: str):
        self.lines.extend(s.rstrip("\n").split("\n"))

    def render(self) -> str:
        return "\n".join(self.lines) + "\n" if self.lines else ""


def _load(path: str) -> Automaton:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    return from_text(text)


# ---------------------------------------------------------------------------
# gen
# ---------------------------------------------------------------------------


def cmd_gen(args, out: Output):
    fam, params = args.family, args.params
    need = {"cerny": 1, "xnk": 2, "random-dfa": 2, "random-decoder": 1, "eulerian": 2, "code": 1}
    if len(params) != need[fam]:
        raise UsageError(f"{fam} expects {need[fam]} parameter(s)")
    labels = None
    if fam == "code":
        dec = decoder_from_code(PrefixCode.from_text(Path(params[0]).read_text()))
        a, labels = dec.automaton, dec.labels_text()
    else:
        try:
            nums = [int(p) for p in params]
        except ValueError:
            raise UsageError("parameters must be integers") from None
        if fam == "cerny":
            a = gen_cerny(nums[0])
        elif fam == "xnk":
            a = gen_xnk(*nums)
        elif fam == "random-dfa":
            a = gen_random_dfa(nums[0], nums[1], np.random.SeedSequence([args.seed, *nums]))
        elif fam == "eulerian":
            a = gen_eulerian(nums[0], nums[1], np.random.SeedSequence([args.seed, *nums]))
        else:
            dec = gen_random_decoder(nums[0], np.random.SeedSequence([args.seed, *nums]))
            a, labels = dec.automaton, dec.labels_text()
    if args.labels and labels is None:
        raise UsageError("--labels only applies to decoder families")
    if args.labels:
        Path(args.labels).write_text(labels)
    body = to_dot(a) if args.dot else to_text(a)
    meta = f"# family={fam} params={','.join(params)} seed={args.seed} n={a.n} k={a.k}\n"
    if args.out:
        Path(args.out).write_text(meta + body)
        out.kv("family", fam)
        out.kv("n", a.n)
        out.kv("k", a.k)
        out.kv("digest", a.digest())
        out.kv("file", args.out)
    else:
        out.text(body if args.dot else meta + body)


# ---------------------------------------------------------------------------
# analyze
# ---------------------------------------------------------------------------


def cmd_analyze(args, out: Output):
    a = _load(args.file)
    out.kv("n", a.n)
    out.kv("k", a.k)
    out.kv("digest", a.digest())
    sync = is_synchronizing(a)
    out.kv("synchronizing", sync)
    if not sync:
        pair = incompressible_pair(a)
        out.kv("incompressible_pair", f"{pair[0]} {pair[1]}")
    out.kv("strongly_connected", is_strongly_connected(a))
    sink, unique = sink_component(a)
    out.kv("sink_component", " ".join(map(str, sorted(sink))))
    out.kv("sink_unique", unique)
    ranks = [rank_of_word(a, (x,)) for x in range(a.k)]
    for x in range(a.k):
        st = letter_clusters(a, x)
        out.kv(f"letter.{x}.rank", ranks[x])
        out.kv(f"letter.{x}.clusters", len(st.clusters))
        out.kv(f"letter.{x}.largest_cycle", len(st.largest_cycle))
        out.kv(f"letter.{x}.height", st.h)
        out.kv(f"letter.{x}.other_cycle_states", st.other_cycle_states)
    out.kv("quasi_one_cluster_c", best_cluster_letter(a).other_cycle_states)
    for c in range(min(3, a.n)):
        wit = detect_quasi_eulerian(a, c)
        out.kv(f"quasi_eulerian.{c}", wit is not None)
    out.kv("decoder", as_decoder(a) is not None)
    r = min(ranks)
    out.kv("cerny_by_letter_rank", sync and r**3 <= 6 * a.n - 6)


# ---------------------------------------------------------------------------
# synth
# ---------------------------------------------------------------------------


def _method(a: Automaton, name: str):
    base, _, arg = name.partition(":")
    if base in ("quasi-eulerian", "quasi-one-cluster"):
        try:
            c = int(arg)
        except ValueError:
            raise UsageError(f"{base} needs an integer c, e.g. {base}:0") from None
        return (quasi_eulerian_reset if base == "quasi-eulerian" else quasi_one_cluster_reset)(a, c)
    if arg:
        raise UsageError(f"unknown method {name!r}")
    if base == "greedy-comp":
        return greedy_compression(a)
    if base == "greedy-ext":
        return extension_reset(a)
    if base == "decoder":
        dec = as_decoder(a)
        if dec is None:
            raise ClassMismatchError("automaton is not the decoder of a prefix code")
        return decoder_reset(dec)
    raise UsageError(f"unknown method {name!r}")


def _auto_methods(a: Automaton) -> list[str]:
    methods = []
    if as_decoder(a) is not None:
        methods.append("decoder")
    methods.append(f"quasi-one-cluster:{best_cluster_letter(a).other_cycle_states}")
    if is_strongly_connected(a):
        methods += [f"quasi-eulerian:{c}" for c in range(min(3, a.n))]
        methods.append("greedy-ext")
    methods.append("greedy-comp")
    return methods


def cmd_synth(args, out: Output):
    a = _load(args.file)
    if not is_synchronizing(a):
        pair = incompressible_pair(a)
        raise PreconditionError(f"automaton is not synchronizing; states {pair[0]} and {pair[1]} never merge")
    if args.method == "auto":
        best, tried = None, []
        for m in _auto_methods(a):
            try:
                cert = _method(a, m)
            except (ClassMismatchError, PreconditionError):
                continue
            tried.append(m)
            if best is None or cert.bound_value < best[1].bound_value:
                best = (m, cert)
        method, cert = best
        out.kv("tried", ",".join(tried))
    else:
        method, cert = args.method, _method(a, args.method)
    if rank_of_word(a, cert.word) != 1:
        raise ResetWordError("internal error: synthesized word is not a reset word")
    out.kv("method", method)
    out.kv("digest", a.digest())
    out.word("word", cert.word)
    out.kv("length", len(cert.word))
    out.kv("bound", cert.bound_name)
    out.kv("bound_value", cert.bound_value)
    if args.trace:
        for i, s in enumerate(cert.steps):
            out.word(f"step.{i}", s)


# ---------------------------------------------------------------------------
# oracle
# ---------------------------------------------------------------------------


def cmd_oracle(args, out: Output):
    a = _load(args.file)
    res = exact_reset_threshold(a)
    out.kv("n", a.n)
    out.kv("backend", _kernels.backend_name())
    if res.word is None:
        out.kv("synchronizing", False)
        out.kv("reset_threshold", "inf")
    else:
        out.kv("synchronizing", True)
        out.kv("reset_threshold", res.length)
        out.word("word", res.word)
    pt = exact_pair_threshold(a).length
    out.kv("pair_threshold", "inf" if pt == float("inf") else pt)


# ---------------------------------------------------------------------------
# experiment
# ---------------------------------------------------------------------------


def _fmt_num(x) -> str:
    return "-" if x is None else f"{x:.4f}"


def fitted_exponent(ns, values) -> float | None:
    pts = [(n, v) for n, v in zip(ns, values) if v is not None and v > 0 and n > 1]
    if len(pts) < 2:
        return None
    x = np.log([p[0] for p in pts])
    y = np.log([p[1] for p in pts])
    return float(np.polyfit(x, y, 1)[0])


def _summary(xs):
    if not xs:
        return None, None, None
    return statistics.fmean(xs), statistics.median(xs), max(xs)


def run_experiment(kind: str, n_values, samples: int, seed: int, k: int = 2, oracle_cap: int = 16):
    """Rows of per-n statistics plus the fitted growth exponent of mean exact rt."""
    rows, means, ns = [], [], []
    for n in n_values:
        rts, certs, sync = [], [], 0
        for i in range(samples):
            ss = np.random.SeedSequence([seed, n, i])
            if kind == "random-dfa-rt":
                a = gen_random_dfa(n, k, ss)
                if not is_synchronizing(a):
                    continue
                cert = greedy_compression(a)
            else:
                dec = gen_random_decoder(n, ss)
                a = dec.automaton
                if not is_synchronizing(a):
                    continue
                cert = decoder_reset(dec)
            sync += 1
            certs.append(len(cert.word))
            if n <= min(oracle_cap, MAX_ORACLE_STATES):
                rts.append(exact_reset_threshold(a).length)
        if samples == 0:
            continue
        rt = _summary(rts)
        ce = _summary(certs)
        rows.append(
            [n, samples, sync, _fmt_num(sync / samples)]
            + [_fmt_num(v) for v in rt]
            + [_fmt_num(v) for v in ce]
        )
        ns.append(n)
        means.append(rt[0])
    columns = ["n", "samples", "synchronizing", "sync_fraction", "mean_rt", "median_rt", "max_rt",
               "mean_cert", "median_cert", "max_cert"]
    return columns, rows, fitted_exponent(ns, means)


def cmd_experiment(args, out: Output):
    if args.n_min < 1 or args.n_max < args.n_min:
        raise UsageError("need 1 <= n-min <= n-max")
    if args.samples < 0:
        raise UsageError("samples must be non-negative")
    columns, rows, expo = run_experiment(
        args.kind, range(args.n_min, args.n_max + 1), args.samples, args.seed, args.k, args.oracle_cap
    )
    out.kv("kind", args.kind)
    out.kv("seed", args.seed)
    out.kv("samples", args.samples)
    out.table(columns, rows)
    out.kv("fitted_exponent", "-" if expo is None else f"{expo:.4f}")


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="resetword", description="Synchronizing automata: reset words with certified length bounds.")
    p.add_argument("--pretty", action="store_true", help="human-readable output")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="generate an automaton")
    g.add_argument("family", choices=["cerny", "xnk", "random-dfa", "random-decoder", "eulerian", "code"])
    g.add_argument("params", nargs="*", help="cerny N | xnk N K | random-dfa N K | random-decoder N | eulerian N K | code FILE")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", help="write the automaton here instead of stdout")
    g.add_argument("--labels", help="write decoder state labels here")
    g.add_argument("--dot", action="store_true", help="emit Graphviz instead of the text format")
    g.set_defaults(func=cmd_gen)

    an = sub.add_parser("analyze", help="structural report")
    an.add_argument("file")
    an.set_defaults(func=cmd_analyze)

    s = sub.add_parser("synth", help="synthesize a certified reset word")
    s.add_argument("file")
    s.add_argument("--method", default="auto",
                   help="auto | greedy-ext | greedy-comp | decoder | quasi-eulerian:C | quasi-one-cluster:C")
    s.add_argument("--trace", action="store_true", help="print the synthesis steps")
    s.set_defaults(func=cmd_synth)

    o = sub.add_parser("oracle", help="exact reset threshold by subset BFS")
    o.add_argument("file")
    o.set_defaults(func=cmd_oracle)

    e = sub.add_parser("experiment", help="batch statistics over random automata")
    e.add_argument("kind", choices=["random-dfa-rt", "random-decoder-rt"])
    e.add_argument("--n-min", type=int, default=4)
    e.add_argument("--n-max", type=int, default=12)
    e.add_argument("--samples", type=int, default=100)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--k", type=int, default=2, help="alphabet size for random-dfa-rt")
    e.add_argument("--oracle-cap", type=int, default=16, help="largest n for exact thresholds")
    e.set_defaults(func=cmd_experiment)
    return p


def main(argv=None) -> int:
    out = None
    try:
        args = build_parser().parse_args(argv)
        out = Output(args.pretty)
        args.func(args, out)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except ResetWordError as exc:
        if out is not None:
            sys.stdout.write(out.render())
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except AssertionError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 4
    sys.stdout.write(out.render())
    return 0


if __name__ == "__main__":
    sys.exit(main())
