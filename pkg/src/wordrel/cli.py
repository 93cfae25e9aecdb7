"""Command-line entry point: ``wordrel {eval,sweep,fit,solve}``.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

from . import __version__
from .corpus import AnalogyFile, extract_pairs, parse_analogy_file
from .embeddings import FORMATS, EmbeddingTable, file_digest, load_embeddings
from .errors import DataError, NumericError, UnknownCategory
from .evaluation import DEFAULT_GRID, EXCLUSION_POLICY, evaluate_all, sweep_n
from .reports import format_table, write_report_json, write_results_csv, write_sweep_csv
from .serialization import load_transform, save_transform
from .transforms import KINDS, SolverConfig, fit, rank_3cosadd, rank_3cosmul

log = logging.getLogger("wordrel")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3
METHODS = ("3cosadd", "3cosmul", "translative", "orthogonal", "linear")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _kind_list(text: str) -> list[str]:
    kinds = [k.strip() for k in text.split(",") if k.strip()]
    bad = [k for k in kinds if k not in KINDS]
    if bad or not kinds:
        raise argparse.ArgumentTypeError(f"unknown kinds {bad}; choose from {','.join(KINDS)}")
    return kinds


@dataclass
class RunConfig:
    embeddings: str
    format: str
    limit: int | None
    analogies: str | None
    lowercase: bool
    kinds: list[str]
    n: int
    seeds: list[int]
    epsilon: float
    threads: int
    out: str
    exclusion_policy: str = EXCLUSION_POLICY

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        return cls(
            embeddings=args.embeddings,
            format=args.format,
            limit=args.limit,
            analogies=args.analogies,
            lowercase=args.lowercase,
            kinds=args.kinds,
            n=args.n,
            seeds=args.seed,
            epsilon=args.epsilon,
            threads=args.threads,
            out=args.out,
        )

    def validate(self, need_analogies: bool) -> None:
        if not os.path.isfile(self.embeddings):
            raise DataError(f"embeddings file not found: {self.embeddings}")
        if need_analogies:
            if self.analogies is None:
                raise UsageError("--analogies is required for this command")
            if not os.path.isfile(self.analogies):
                raise DataError(f"analogy file not found: {self.analogies}")
        if self.n < 1 or not self.seeds or self.epsilon <= 0 or self.threads < 1:
            raise UsageError("--n, --threads must be >= 1, --seed non-empty, --epsilon > 0")


def _add_common(p: argparse.ArgumentParser, analogies_required: bool = True) -> None:
    p.add_argument("--embeddings", required=True, metavar="PATH")
    p.add_argument("--format", choices=FORMATS, default="glove-text")
    p.add_argument("--limit", type=int, metavar="N", help="keep the first N vocabulary entries")
    p.add_argument("--analogies", required=analogies_required, metavar="PATH")
    p.add_argument("--lowercase", action="store_true", help="lowercase analogy tokens on parse")
    p.add_argument("--kinds", type=_kind_list, default=list(KINDS), metavar="LIST")
    p.add_argument("--n", type=int, default=2000, metavar="N", help="fit-sample size")
    p.add_argument("--seed", type=_int_list, default=[0], metavar="N[,N...]")
    p.add_argument("--epsilon", type=float, default=1e-3, metavar="F", help="3CosMul epsilon")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1, metavar="N")
    p.add_argument("--out", default=".", metavar="DIR")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wordrel", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", help="per-category accuracy and cosine for each transform kind")
    _add_common(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sweep", help="metrics as a function of the fit-sample size n")
    _add_common(p)
    p.add_argument("--grid", type=_int_list, default=list(DEFAULT_GRID), metavar="LIST")
    p.set_defaults(func=cmd_sweep, seed=[0, 1, 2])

    p = sub.add_parser("fit", help="fit and save transforms for one category")
    _add_common(p)
    p.add_argument("--category", required=True)
    p.add_argument("--binary", action="store_true", help="write the binary transform format")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("solve", help="answer a : b :: x : ?")
    _add_common(p, analogies_required=False)
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("x")
    p.add_argument("--method", choices=METHODS, default="3cosadd")
    p.add_argument("--k", type=int, default=5, help="number of candidates to print")
    p.add_argument("--transform", metavar="PATH", help="saved transform file")
    p.add_argument("--category", help="fit the transform on this analogy category")
    p.set_defaults(func=cmd_solve)
    return parser


def _load_inputs(cfg: RunConfig, need_analogies: bool = True) -> tuple[EmbeddingTable, AnalogyFile | None]:
    table = load_embeddings(cfg.embeddings, cfg.format, cfg.limit)
    log.info("loaded %d vectors of dim %d from %s", len(table), table.dim, cfg.embeddings)
    corpus = None
    if need_analogies and cfg.analogies is not None:
        corpus = parse_analogy_file(cfg.analogies, lowercase=cfg.lowercase)
    return table, corpus


def _meta(cfg: RunConfig, table: EmbeddingTable) -> dict:
    meta = {"config": asdict(cfg), "embeddings_sha256": table.digest}
    if cfg.analogies is not None:
        meta["analogies_sha256"] = file_digest(cfg.analogies)
    return meta


def _single_seed(cfg: RunConfig) -> int:
    if len(cfg.seeds) != 1:
        raise UsageError("this command takes exactly one --seed")
    return cfg.seeds[0]


def _pair_sets(corpus: AnalogyFile, table: EmbeddingTable):
    sets = []
    for cat in corpus:
        try:
            sets.append(extract_pairs(cat, table))
        except DataError as exc:
            log.warning("skipping category %s: %s", cat.name, exc)
    if not sets:
        raise DataError("no category has in-vocabulary pairs")
    return sets


def cmd_eval(args) -> int:
    cfg = RunConfig.from_args(args)
    cfg.validate(need_analogies=True)
    seed = _single_seed(cfg)
    table, corpus = _load_inputs(cfg)
    result = evaluate_all(_pair_sets(corpus, table), table, SolverConfig(cfg.n, seed, cfg.epsilon),
                          cfg.kinds, cfg.threads)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    meta = _meta(cfg, table)
    write_report_json(result, out / "report.json", meta)
    write_results_csv(result, out / "results.csv", meta)
    print(format_table(result))
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = RunConfig.from_args(args)
    cfg.validate(need_analogies=True)
    grid = args.grid
    if not grid or grid != sorted(grid) or grid[0] < 1:
        raise UsageError("--grid must be a non-empty ascending list of positive counts")
    table, corpus = _load_inputs(cfg)
    if grid[-1] > len(table):
        raise DataError(f"grid value {grid[-1]} exceeds vocabulary size {len(table)}")
    points = sweep_n(_pair_sets(corpus, table), table, grid, cfg.seeds, cfg.kinds, cfg.epsilon, cfg.threads)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    meta = _meta(cfg, table)
    meta["config"]["grid"] = grid
    write_sweep_csv(points, out / "sweep.csv", meta)
    for p in points:
        print(f"n={p.n:<6d} " + "  ".join(f"{k}: acc={a:.3f} cos={c:.3f}" for k, (a, c) in p.metrics.items()))
    return EXIT_OK


def _category_pairs(corpus: AnalogyFile, name: str, table: EmbeddingTable):
    try:
        return extract_pairs(corpus.get(name), table)
    except KeyError:
        raise UnknownCategory(f"unknown category {name!r}; available: {', '.join(corpus.names())}") from None


def cmd_fit(args) -> int:
    cfg = RunConfig.from_args(args)
    cfg.validate(need_analogies=True)
    seed = _single_seed(cfg)
    table, corpus = _load_inputs(cfg)
    pairs = _category_pairs(corpus, args.category, table)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    meta = {**_meta(cfg, table), "category": args.category, "pair_count": len(pairs)}
    solver = SolverConfig(cfg.n, seed, cfg.epsilon)
    for kind in cfg.kinds:
        t = fit(kind, pairs, table, solver)
        path = out / f"{args.category}.{kind}.{'bin' if args.binary else 'json'}"
        save_transform(t, path, binary=args.binary, meta=meta)
        print(path)
    return EXIT_OK


def cmd_solve(args) -> int:
    cfg = RunConfig.from_args(args)
    cfg.validate(need_analogies=args.category is not None)
    if args.k < 1:
        raise UsageError("--k must be >= 1")
    table, corpus = _load_inputs(cfg, need_analogies=args.category is not None)
    for token in (args.a, args.b, args.x):
        table.row(token)
    if args.method == "3cosadd":
        results = rank_3cosadd(table, args.a, args.b, args.x, k=args.k)
    elif args.method == "3cosmul":
        results = rank_3cosmul(table, args.a, args.b, args.x, epsilon=cfg.epsilon, k=args.k)
    else:
        if args.transform:
            t = load_transform(args.transform)
            if t.kind != args.method:
                raise UsageError(f"--transform holds a {t.kind} transform, not {args.method}")
        elif args.category:
            pairs = _category_pairs(corpus, args.category, table)
            t = fit(args.method, pairs, table, SolverConfig(cfg.n, _single_seed(cfg), cfg.epsilon))
        else:
            raise UsageError(f"--method {args.method} needs --transform or --category")
        results = table.nearest(t.apply(table.vector(args.x)), exclude={args.a, args.b, args.x}, k=args.k)
    print(f"{args.a} : {args.b} :: {args.x} : ?  ({args.method})")
    for rank, r in enumerate(results, 1):
        print(f"{rank:3d}  {r.token}  {r.similarity:.6f}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"wordrel: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"wordrel: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericError as exc:
        print(f"wordrel: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"wordrel: invalid argument: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
