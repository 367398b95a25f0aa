"""Command-line front end.

Exit codes: 0 yes/success, 1 no, 2 usage or input error, 3 refused
(brute-force caps, guess budget, missing gadget).

Vertex, test and item ids on the command line and in reports are 1-based,
matching the file formats.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from typing import Optional, Sequence

from . import __version__
from .errors import InputError, RefusalError
from .fes import GadgetGap, discover_gadgets, kernel_dot, kernelize_fes, load_library
from .generators import connected_fes, gnp
from .graph import (
    BRUTE_FORCE_CAP,
    Solution,
    brute_force_lds,
    format_graph,
    is_locating_dominating,
    parse_graph,
)
from .lds import SOLVERS, nd_kernel
from .reductions import (
    TRIVIAL_NO,
    TRIVIAL_YES,
    preprocess_rbds,
    random_rbds,
    rbds_to_lds,
    rbds_to_tc,
)
from .testcover import (
    brute_force_tc,
    format_set_system,
    is_test_cover,
    parse_set_system,
    solve_tc,
)
from .trees import LETTERS, RootedTree, classify_doubly, classify_rooted, opt_doubly, opt_rooted

EXIT_YES, EXIT_NO, EXIT_INPUT, EXIT_REFUSED = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _Usage(f"{self.prog}: error: {message}")


class _Usage(Exception):
    pass


def _read_text(path: Optional[str]) -> str:
    if path in (None, "-"):
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _write_text(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror}") from None


def _ids(text: str) -> list[int]:
    if not text.strip():
        return []
    try:
        out = [int(x) - 1 for x in text.split(",")]
    except ValueError:
        raise InputError(f"witness must be comma-separated integers, got {text!r}") from None
    return out


class Report:
    def __init__(self, command: str, as_json: bool):
        self.command = command
        self.as_json = as_json
        self.data: dict = {"command": command}
        self.notes: list[str] = []

    def result(self, yes: bool, sol: Optional[Solution] = None) -> int:
        self.data["result"] = "yes" if yes else "no"
        self.data["size"] = sol.size if sol is not None else None
        self.data["witness"] = [v + 1 for v in sol.vertices] if sol is not None else []
        return EXIT_YES if yes else EXIT_NO

    def line(self) -> str:
        d = self.data
        size = "-" if d.get("size") is None else d["size"]
        wit = ",".join(str(v) for v in d.get("witness", []))
        return f"result={d['result']} size={size} witness={wit}"

    def emit(self, out) -> None:
        if self.as_json:
            out.write(json.dumps(self.data, indent=2, sort_keys=True) + "\n")
            return
        if "result" in self.data:
            out.write(self.line() + "\n")
        for n in self.notes:
            out.write(n + "\n")


# ---------------------------------------------------------------------------
# subcommands


def _budget(args, n: int) -> tuple[int, str]:
    if args.opt:
        return n, "optimize"
    if args.k < 0:
        raise InputError("-k must be non-negative")
    return args.k, "decide"


def cmd_solve_lds(args, rep: Report) -> int:
    g = parse_graph(_read_text(args.input))
    k, mode = _budget(args, g.n)
    if args.param == "bruteforce":
        best = brute_force_lds(g, max(args.cap, BRUTE_FORCE_CAP))
        sol = best if best.size <= k else None
    else:
        solver = SOLVERS[args.param]
        sol = solver(g, k, mode=mode)
    if sol is not None:
        assert is_locating_dominating(g, sol.vertices)
    rep.data.update(param=args.param, mode=mode, k=None if args.opt else k, n=g.n, m=g.m)
    rep.notes.append(f"c param={args.param} mode={mode} n={g.n} m={g.m}")
    return rep.result(sol is not None, sol)


def cmd_solve_tc(args, rep: Report) -> int:
    sys_ = parse_set_system(_read_text(args.input))
    k, mode = _budget(args, max(sys_.universe_size, len(sys_.tests)))
    if args.param == "bruteforce":
        best = brute_force_tc(sys_)
        sol = best if best is not None and best.size <= k else None
    else:
        sol = solve_tc(sys_, k, mode=mode)
    rep.data.update(param=args.param, mode=mode, k=None if args.opt else k, items=sys_.universe_size, tests=len(sys_.tests))
    return rep.result(sol is not None, sol)


def cmd_kernelize(args, rep: Report) -> int:
    g = parse_graph(_read_text(args.input))
    if args.param == "fes":
        lib = load_library(args.library) if args.library else load_library()
        strict_first = args.strict and not args.discover_max_n
        kernel, k2, report = kernelize_fes(g, args.k, lib, strict=strict_first)
        if report.gaps and args.discover_max_n and args.discover_max_n > lib.max_n:
            lib = discover_gadgets(args.discover_max_n)
            rep.notes.append(f"c rediscovered gadgets up to {lib.max_n} vertices")
            kernel, k2, report = kernelize_fes(g, args.k, lib, strict=args.strict)
        elif report.gaps and args.strict:
            kernel, k2, report = kernelize_fes(g, args.k, lib, strict=True)
        rep.data.update(report.as_dict())
    else:
        kernel, k2 = nd_kernel(g, args.k)
        rep.data.update(n_in=g.n, n_kernel=kernel.n, m_kernel=kernel.m)
    rep.data.update(param=args.param, k=args.k, k_prime=k2)
    text = format_graph(kernel, [f"kernel of a {g.n}-vertex graph, param={args.param}, k'={k2}"])
    if args.out:
        _write_text(args.out, text)
        rep.data["out"] = args.out
    elif not rep.as_json:
        rep.notes.append(text.rstrip("\n"))
    else:
        rep.data["kernel"] = text
    if args.dot:
        _write_text(args.dot, kernel_dot(kernel))
    rep.notes.append(f"k'={k2}")
    rep.notes.append(f"c n={kernel.n} m={kernel.m}")
    return EXIT_YES


def cmd_gen(args, rep: Report) -> int:
    rng = random.Random(args.seed)
    if args.source == "rbds":
        if args.to is None:
            raise InputError("gen --from rbds needs --to {lds,tc}")
        raw = random_rbds(args.red, args.blue, rng)
        if args.k is not None:
            raw = type(raw).of(raw.n_red, raw.n_blue, raw.edges, args.k)
        inst = preprocess_rbds(raw)
        tries = 0
        while isinstance(inst, str) and args.k is None and tries < 1000:
            raw = random_rbds(args.red, args.blue, rng)
            inst = preprocess_rbds(raw)
            tries += 1
        if inst == TRIVIAL_NO or inst == TRIVIAL_YES:
            raise InputError(f"generated instance is {inst}; pick another seed or budget")
        rep.data.update(source="rbds", n_red=inst.n_red, n_blue=inst.n_blue, k_source=inst.k)
        if args.to == "lds":
            g, k = rbds_to_lds(inst)
            text = format_graph(g, [f"rbds reduction, |R'|={inst.n_red} |B'|={inst.n_blue} k'={inst.k}"])
        else:
            s, k = rbds_to_tc(inst)
            text = "c rbds reduction, |R'|={} |B'|={} k'={}\n".format(inst.n_red, inst.n_blue, inst.k)
            text += format_set_system(s)
    else:
        if args.to not in (None, "lds"):
            raise InputError(f"gen --from {args.source} produces graphs only")
        if args.source == "gnp":
            g = gnp(args.n, args.p, rng)
        else:
            g = connected_fes(args.n, args.fes, rng)
        k = args.k if args.k is not None else max(g.n // 2, 0)
        text = format_graph(g, [f"{args.source} n={args.n} seed={args.seed}"])
    text += f"c k={k}\n"
    rep.data["k"] = k
    if args.out:
        _write_text(args.out, text)
        rep.data["out"] = args.out
        rep.notes.append(f"k={k}")
    elif rep.as_json:
        rep.data["instance"] = text
    else:
        rep.notes.append(text.rstrip("\n"))
    return EXIT_YES


def cmd_verify(args, rep: Report) -> int:
    text = _read_text(args.input)
    wit = _ids(args.witness)
    if args.kind == "tc":
        s = parse_set_system(text)
        ok = is_test_cover(s, wit)
    else:
        g = parse_graph(text)
        for v in wit:
            if not 0 <= v < g.n:
                raise InputError(f"witness vertex {v + 1} out of range 1..{g.n}")
        ok = is_locating_dominating(g, wit)
    return rep.result(ok, Solution(tuple(sorted(set(wit)))))


def cmd_tree_opt(args, rep: Report) -> int:
    g = parse_graph(_read_text(args.input))
    r2 = None if args.root2 is None else args.root2 - 1
    t = RootedTree(g, args.root - 1, r2)
    if r2 is None:
        vals = opt_rooted(t)
        letter, k = classify_rooted(t)
        rep.data.update(opt=dict(zip(LETTERS, vals)), tree_class=letter, k=k)
        rep.notes.append(" ".join(f"opt_{x}={v}" for x, v in zip(LETTERS, vals)))
        rep.notes.append(f"class=T_{letter} k={k}")
    else:
        vals = opt_doubly(t)
        sig, base = classify_doubly(t)
        rep.data.update(opt={x + y: vals[5 * i + j] for i, x in enumerate(LETTERS) for j, y in enumerate(LETTERS)})
        rep.data.update(signature=sig, base=base)
        for i, x in enumerate(LETTERS):
            rep.notes.append(" ".join(f"opt_{x}{y}={vals[5 * i + j]}" for j, y in enumerate(LETTERS)))
        rep.notes.append(f"signature={sig} base={base}")
    return EXIT_YES


def cmd_gadgets(args, rep: Report) -> int:
    if args.action == "discover":
        lib = discover_gadgets(args.max_n)
        text = lib.dumps()
        if args.out:
            _write_text(args.out, text)
            rep.data["out"] = args.out
        else:
            rep.notes.append(text.rstrip("\n"))
        rep.data.update(max_n=lib.max_n, count=len(lib.entries))
        rep.notes.append(f"c classes={len(lib.entries)} max_n={lib.max_n}")
    else:
        lib = load_library(args.library)
        sizes = [e.tree.n for e in lib.entries.values()]
        rep.data.update(max_n=lib.max_n, count=len(lib.entries), largest_gadget=max(sizes, default=0))
        rep.notes.append(f"library ok: {len(lib.entries)} classes, max_n={lib.max_n}, largest gadget {max(sizes, default=0)}")
    return EXIT_YES


def cmd_oracle(args, rep: Report) -> int:
    text = _read_text(args.input)
    if args.kind == "tc":
        sol = brute_force_tc(parse_set_system(text))
        return rep.result(sol is not None, sol)
    g = parse_graph(text)
    sol = brute_force_lds(g, args.cap)
    return rep.result(True, sol)


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="idsolve", description="Exact solvers for locating-dominating sets and test covers.")
    p.add_argument("--version", action="version", version=f"idsolve {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, with_input=True):
        if with_input:
            sp.add_argument("input", nargs="?", default="-", help="input file, '-' for stdin")
        sp.add_argument("--json", action="store_true", help="structured report")
        sp.add_argument("--threads", type=int, default=None, help="worker cap (default: available cores)")
        sp.add_argument("--seed", type=int, default=0)

    def budget(sp):
        g = sp.add_mutually_exclusive_group(required=True)
        g.add_argument("-k", type=int, help="decide whether a solution of size <= k exists")
        g.add_argument("--opt", action="store_true", help="report the exact optimum")

    sp = sub.add_parser("solve-lds", help="locating-dominating set")
    common(sp)
    budget(sp)
    sp.add_argument("--param", choices=["vc", "tc", "dc", "nd", "bruteforce"], default="vc")
    sp.add_argument("--cap", type=int, default=BRUTE_FORCE_CAP, help="vertex cap for brute force")
    sp.set_defaults(func=cmd_solve_lds)

    sp = sub.add_parser("solve-tc", help="test cover")
    common(sp)
    budget(sp)
    sp.add_argument("--param", choices=["exact", "bruteforce"], default="exact")
    sp.set_defaults(func=cmd_solve_tc)

    sp = sub.add_parser("kernelize", help="kernel for LDS")
    common(sp)
    sp.add_argument("--param", choices=["fes", "nd"], default="fes")
    sp.add_argument("-k", type=int, required=True)
    sp.add_argument("--out", help="write the kernel here instead of stdout")
    sp.add_argument("--dot", help="also write the kernel as DOT")
    sp.add_argument("--library", help="gadget library (default: $IDSOLVE_GADGETS or bundled)")
    sp.add_argument("--strict", action="store_true", help="refuse when a gadget class is missing")
    sp.add_argument("--discover-max-n", type=int, default=None,
                    help="on a gadget gap, rediscover the library up to this tree size and retry")
    sp.set_defaults(func=cmd_kernelize)

    sp = sub.add_parser("gen", help="generate instances")
    common(sp, with_input=False)
    sp.add_argument("--from", dest="source", choices=["rbds", "gnp", "fes"], required=True)
    sp.add_argument("--to", choices=["lds", "tc"])
    sp.add_argument("--red", type=int, default=6)
    sp.add_argument("--blue", type=int, default=4)
    sp.add_argument("-n", type=int, default=12)
    sp.add_argument("-p", type=float, default=0.3)
    sp.add_argument("--fes", type=int, default=2)
    sp.add_argument("-k", type=int, default=None)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("verify", help="check a witness")
    common(sp)
    sp.add_argument("--witness", required=True, help="comma-separated 1-based ids")
    sp.add_argument("--kind", choices=["lds", "tc"], default="lds")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("tree-opt", help="type optima of a rooted tree")
    common(sp)
    sp.add_argument("--root", type=int, default=1)
    sp.add_argument("--root2", type=int, default=None)
    sp.set_defaults(func=cmd_tree_opt)

    sp = sub.add_parser("gadgets", help="gadget library management")
    common(sp, with_input=False)
    sp.add_argument("action", choices=["discover", "check"])
    sp.add_argument("--max-n", type=int, default=10)
    sp.add_argument("--out")
    sp.add_argument("--library")
    sp.set_defaults(func=cmd_gadgets)

    sp = sub.add_parser("oracle", help="brute-force optimum")
    common(sp)
    sp.add_argument("--kind", choices=["lds", "tc"], default="lds")
    sp.add_argument("--cap", type=int, default=BRUTE_FORCE_CAP)
    sp.set_defaults(func=cmd_oracle)
    return p


def _set_threads(n: Optional[int]) -> None:
    # every loop runs sequentially, so the cap is validated and reported only
    if n is not None and n < 1:
        raise InputError("--threads must be positive")


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _Usage as exc:
        err.write(str(exc) + "\n")
        return EXIT_INPUT
    except SystemExit as exc:
        return int(exc.code or 0)
    rep = Report(args.command, args.json)
    try:
        _set_threads(args.threads)
        rep.data["threads"] = args.threads or os.cpu_count() or 1
        code = args.func(args, rep)
    except GadgetGap as exc:
        err.write(f"refused: missing gadget for class {exc.signature}\n")
        return EXIT_REFUSED
    except RefusalError as exc:
        err.write(f"refused: {exc}\n")
        return EXIT_REFUSED
    except InputError as exc:
        err.write(f"input error: {exc}\n")
        return EXIT_INPUT
    rep.emit(out)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
