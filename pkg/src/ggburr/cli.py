"""Command-line front end.

Subcommands::

    fit       fit one or more models to a dataset
    compare   fit, then likelihood-ratio and goodness-of-fit tables
    quantile  quantile series for given parameters
    sample    random draws for given parameters
    density   (x, pdf, hazard) series for given parameters

Exit status is 0 on success, 3 when some fit did not converge and 1 on
usage or input errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .datasets import CorpusId, DataFormatError, load_csv, load_embedded
from .gammag import MODEL_CODES, GGModel, free_parameter_names
from .gof import CensoredDataError, gof_report
from .inference import FitOptions, FitResult, confidence_intervals, fit_mle, lr_test
from .specfun import DomainError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NOT_CONVERGED = 3

_COLUMNS = ("alpha", "beta", "lam", "delta", "p", "theta")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# --- argument helpers -------------------------------------------------------


def _model_list(text: str) -> list[str]:
    codes = [c.strip().lower() for c in text.split(",") if c.strip()]
    if not codes:
        raise UsageError("at least one model is required")
    for c in codes:
        if c not in MODEL_CODES:
            raise UsageError(f"unknown model {c!r}; choose from {', '.join(MODEL_CODES)}")
    if len(set(codes)) != len(codes):
        raise UsageError("a model is listed twice")
    return codes


def _load_data(args):
    if args.csv and args.dataset:
        raise UsageError("give either --dataset or --csv, not both")
    if args.csv:
        try:
            return load_csv(args.csv, value_col=args.value_col, censor_col=args.censor_col)
        except FileNotFoundError:
            raise UsageError(f"no such file: {args.csv}") from None
        except DataFormatError as exc:
            raise UsageError(str(exc)) from None
    if args.dataset:
        try:
            return load_embedded(args.dataset)
        except ValueError:
            names = ", ".join(c.value for c in CorpusId)
            raise UsageError(f"unknown dataset {args.dataset!r}; choose from {names}") from None
    raise UsageError("one of --dataset or --csv is required")


def _parse_params(text: str) -> dict:
    out = {}
    for item in text.split(","):
        if not item.strip():
            continue
        if "=" not in item:
            raise UsageError(f"parameter {item!r} is not of the form name=value")
        k, v = item.split("=", 1)
        try:
            out[k.strip()] = float(v)
        except ValueError:
            raise UsageError(f"parameter {k.strip()} has non-numeric value {v!r}") from None
    return out


def _model_from_args(args) -> GGModel:
    code = _model_list(args.model)
    if len(code) != 1:
        raise UsageError("this command takes exactly one --model")
    code = code[0]
    variant, kind, _ = MODEL_CODES[code]
    names = free_parameter_names(variant)
    if args.params and args.fit_file:
        raise UsageError("give either --params or --fit-file, not both")
    if args.fit_file:
        values = _params_from_fit_file(args.fit_file, code)
    elif args.params:
        values = _parse_params(args.params)
    else:
        raise UsageError("one of --params or --fit-file is required")
    missing = [n for n in names if n not in values]
    extra = [n for n in values if n not in names]
    if missing:
        raise UsageError(f"missing parameter(s) for {code}: {', '.join(missing)}")
    if extra:
        raise UsageError(f"parameter(s) not used by {code}: {', '.join(extra)}")
    for n in names:
        if not (math.isfinite(values[n]) and values[n] > 0):
            raise UsageError(f"parameter {n} must be positive, got {values[n]!r}")
    return GGModel.from_values(variant, kind, [values[n] for n in names])


def _params_from_fit_file(path, code) -> dict:
    name = MODEL_CODES[code][2]
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    for line in lines:
        if not line.strip():
            continue
        rec = json.loads(line)
        if rec.get("record") == "fit" and rec.get("model") == name:
            return rec["estimates"]
    raise UsageError(f"{path} has no fit record for {name}")


def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"cannot parse number list {text!r}") from None


# --- rendering ----------------------------------------------------------------


def _fmt(v, width=12, digits=4):
    if v is None:
        return "-".rjust(width)
    if isinstance(v, str):
        return v.rjust(width)
    if v != 0 and (abs(v) >= 1e6 or abs(v) < 1e-3):
        return f"{v:.{digits}e}".rjust(width)
    return f"{v:.{digits}f}".rjust(width)


def _estimates_text(fits: list[FitResult]) -> str:
    cols = [c for c in _COLUMNS if any(c in f.names for f in fits)]
    head = "MODEL".ljust(8) + "".join(c.rjust(24) for c in cols) + "  CONVERGED"
    lines = ["Maximum likelihood estimates (standard errors)", head]
    for f in fits:
        est = f.estimates.as_dict()
        se = dict(zip(f.names, f.std_errors)) if f.std_errors is not None else {}
        cells = []
        for c in cols:
            if c not in est:
                cells.append("-".rjust(24))
                continue
            s = f"({_fmt(se[c], 0)})" if c in se else "(n/a)"
            cells.append(f" {_fmt(est[c], 0)} {s}".rjust(24))
        flag = "yes" if f.converged else "NO"
        if f.at_bounds:
            flag += " [bound: " + ",".join(f.at_bounds) + "]"
        lines.append(f.display_name.ljust(8) + "".join(cells) + "  " + flag)
    return "\n".join(lines)


def _criteria_text(fits: list[FitResult]) -> str:
    lines = ["Information criteria",
             "MODEL".ljust(8) + "".join(h.rjust(12) for h in ("-2LL", "AIC", "AICc", "BIC"))]
    for f in fits:
        lines.append(f.display_name.ljust(8)
                     + "".join(_fmt(v, 12, 3) for v in (f.neg2_loglik, f.aic, f.aicc, f.bic)))
    return "\n".join(lines)


def _ci_text(fits: list[FitResult], level: float) -> str:
    lines = [f"Wald {100 * level:g}% confidence intervals"]
    for f in fits:
        if f.std_errors is None:
            lines.append(f"{f.display_name}: unavailable (information matrix not positive definite)")
            continue
        ci = confidence_intervals(f, level)
        parts = [f"{k} [{_fmt(lo, 0)}, {_fmt(hi, 0)}]" for k, (lo, hi) in ci.items()]
        lines.append(f"{f.display_name}: " + "; ".join(parts))
    return "\n".join(lines)


def _fit_record(f: FitResult, level: float) -> dict:
    rec = {"record": "fit"}
    rec.update(f.to_dict())
    rec["level"] = level
    rec["confidence_intervals"] = (
        {k: list(v) for k, v in confidence_intervals(f, level).items()}
        if f.std_errors is not None else None)
    return rec


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _fits_csv(fits: list[FitResult]) -> str:
    cols = [c for c in _COLUMNS if any(c in f.names for f in fits)]
    header = ["model"] + cols + [f"se_{c}" for c in cols] + ["neg2_loglik", "aic", "aicc", "bic",
                                                             "converged"]
    rows = []
    for f in fits:
        est = f.estimates.as_dict()
        se = dict(zip(f.names, f.std_errors)) if f.std_errors is not None else {}
        rows.append([f.display_name] + [repr(est[c]) if c in est else "" for c in cols]
                    + [repr(float(se[c])) if c in se else "" for c in cols]
                    + [repr(f.neg2_loglik), repr(f.aic), repr(f.aicc), repr(f.bic), int(f.converged)])
    return _csv_text(header, rows)


def _write_jsonl(out_dir, name, records):
    if out_dir is None:
        return
    path = Path(out_dir)
    path.mkdir(parents=True, exist_ok=True)
    with (path / name).open("w", encoding="utf-8") as fh:
        for r in records:
            fh.write(json.dumps(r, allow_nan=True) + "\n")


def _emit(args, text, csv_text, records):
    if args.format == "text":
        sys.stdout.write(text.rstrip("\n") + "\n")
    elif args.format == "csv":
        sys.stdout.write(csv_text)
    else:
        for r in records:
            sys.stdout.write(json.dumps(r) + "\n")


# --- commands ---------------------------------------------------------------


def _run_fits(args, data) -> list[FitResult]:
    opts = FitOptions(restarts=args.restarts, seed=args.seed)
    fits = []
    for code in _model_list(args.model):
        variant, kind, _ = MODEL_CODES[code]
        fits.append(fit_mle(variant, kind, data, options=opts))
    return fits


def cmd_fit(args) -> int:
    data = _load_data(args)
    fits = _run_fits(args, data)
    records = [_fit_record(f, args.level) for f in fits]
    text = "\n\n".join([f"Dataset: {data.label} (n = {data.n})", _estimates_text(fits),
                        _criteria_text(fits), _ci_text(fits, args.level)])
    _emit(args, text, _fits_csv(fits), records)
    _write_jsonl(args.out, f"fit-{data.label}.jsonl", records)
    return EXIT_OK if all(f.converged for f in fits) else EXIT_NOT_CONVERGED


def cmd_compare(args) -> int:
    data = _load_data(args)
    fits = _run_fits(args, data)
    records = [_fit_record(f, args.level) for f in fits]
    # GGBIII is the alternative when present, otherwise the first listed model
    alt = next((f for f in fits if f.model_code == "ggbiii"), fits[0])
    lr_rows = []
    for f in fits:
        if f is alt:
            continue
        res = lr_test(f, alt, df=args.df)
        lr_rows.append((alt.display_name, f.display_name, res))
        records.append({"record": "lr", "alternative": alt.display_name, "null": f.display_name,
                        "statistic": res.statistic, "df": res.df, "p_value": res.p_value,
                        "negative": res.negative})
    gof_rows = []
    for f in fits:
        try:
            g = gof_report(f.model, data)
        except CensoredDataError:
            g = None
        gof_rows.append((f.display_name, g))
        rec = {"record": "gof", "model": f.display_name}
        rec.update(g.to_dict() if g is not None else {"ks": None, "cvm": None, "ad": None, "n": data.n})
        records.append(rec)

    lr_lines = ["Likelihood ratio tests",
                "TEST".ljust(20) + "".join(h.rjust(12) for h in ("statistic", "df", "p-value"))]
    for a, n, r in lr_rows:
        lr_lines.append(f"{a} vs {n}".ljust(20) + _fmt(r.statistic, 12, 3) + str(r.df).rjust(12)
                        + _fmt(r.p_value, 12, 4) + ("  (negative)" if r.negative else ""))
    if not lr_rows:
        lr_lines.append("(needs at least two models)")
    gof_lines = ["Goodness of fit",
                 "MODEL".ljust(8) + "".join(h.rjust(12) for h in ("CvM", "AD", "KS"))]
    for name, g in gof_rows:
        if g is None:
            gof_lines.append(name.ljust(8) + "  unavailable for censored data")
        else:
            gof_lines.append(name.ljust(8) + "".join(_fmt(v, 12, 5) for v in (g.cvm, g.ad, g.ks)))

    text = "\n\n".join([f"Dataset: {data.label} (n = {data.n})", _estimates_text(fits),
                        _criteria_text(fits), "\n".join(lr_lines), "\n".join(gof_lines)])
    csv_out = _fits_csv(fits) + "\n" + _csv_text(
        ["alternative", "null", "statistic", "df", "p_value"],
        [[a, n, repr(r.statistic), r.df, repr(r.p_value)] for a, n, r in lr_rows]) + "\n" + _csv_text(
        ["model", "cvm", "ad", "ks"],
        [[name] + ([repr(g.cvm), repr(g.ad), repr(g.ks)] if g else ["", "", ""]) for name, g in gof_rows])
    _emit(args, text, csv_out, records)
    _write_jsonl(args.out, f"compare-{data.label}.jsonl", records)
    return EXIT_OK if all(f.converged for f in fits) else EXIT_NOT_CONVERGED


def _series_out(args, header, rows, comment):
    body = _csv_text(header, rows)
    text = f"# {comment}\n" + body
    if args.out:
        path = Path(args.out)
        path.mkdir(parents=True, exist_ok=True)
        (path / f"{args.command}.csv").write_text(text, encoding="utf-8")
    if args.format == "json-lines":
        for r in rows:
            sys.stdout.write(json.dumps(dict(zip(header, map(float, r)))) + "\n")
    else:
        sys.stdout.write(text)


def _describe(m: GGModel) -> str:
    code = next(c for c, (v, k, _) in MODEL_CODES.items() if v is m.variant and k is m.kind)
    params = ",".join(f"{k}={v!r}" for k, v in m.params.as_dict().items())
    return f"model={code} params={params}"


def cmd_quantile(args) -> int:
    m = _model_from_args(args)
    qs = _float_list(args.q)
    if any(not (0 < q < 1) for q in qs):
        raise UsageError("quantile levels must lie strictly between 0 and 1")
    x = np.atleast_1d(m.quantile(np.array(qs)))
    _series_out(args, ["q", "x"], [[repr(q), repr(float(v))] for q, v in zip(qs, x)], _describe(m))
    return EXIT_OK


def cmd_sample(args) -> int:
    m = _model_from_args(args)
    if args.n < 1:
        raise UsageError("--n must be at least 1")
    s = m.sample(args.n, args.seed)
    _series_out(args, ["x"], [[repr(float(v))] for v in s.values],
                f"{_describe(m)} n={args.n} seed={args.seed}")
    return EXIT_OK


def cmd_density(args) -> int:
    m = _model_from_args(args)
    if args.x:
        x = np.array(_float_list(args.x))
    else:
        try:
            lo, hi, num = args.grid.split(":")
            x = np.linspace(float(lo), float(hi), int(num))
        except ValueError:
            raise UsageError("--grid must look like LO:HI:COUNT") from None
    if not np.all(x > 0):
        raise UsageError("density points must be positive")
    pdf = np.atleast_1d(m.pdf(x))
    haz = np.atleast_1d(m.hazard(x))
    rows = [[repr(float(a)), repr(float(b)), repr(float(c))] for a, b, c in zip(x, pdf, haz)]
    _series_out(args, ["x", "pdf", "hazard"], rows, _describe(m))
    return EXIT_OK


# --- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ggburr", description="Fit and compare gamma-generated Burr III / Dagum models.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def data_args(sp):
        sp.add_argument("--dataset", help="embedded corpus: leukemia, aircon or components")
        sp.add_argument("--csv", help="CSV file of lifetimes")
        sp.add_argument("--value-col", default=0,
                        type=lambda s: int(s) if s.isdigit() else s,
                        help="value column index or header name (default 0)")
        sp.add_argument("--censor-col", default=None,
                        type=lambda s: int(s) if s.isdigit() else s,
                        help="0/1 right-censoring column index or header name")
        sp.add_argument("--model", default="ggbiii",
                        help="comma-separated list from: " + ", ".join(MODEL_CODES))
        sp.add_argument("--seed", type=int, default=0, help="seed for restart jitter")
        sp.add_argument("--restarts", type=int, default=8, help="jittered restarts per fit")
        sp.add_argument("--out", help="directory for JSON-lines output")
        sp.add_argument("--format", choices=("text", "csv", "json-lines"), default="text")
        sp.add_argument("--level", type=float, default=0.95, help="confidence level")

    fit = sub.add_parser("fit", help="fit models by maximum likelihood")
    data_args(fit)
    fit.set_defaults(func=cmd_fit)

    cmp_ = sub.add_parser("compare", help="fit models, then LR and goodness-of-fit tables")
    data_args(cmp_)
    cmp_.add_argument("--df", type=int, default=1,
                      help="chi-square degrees of freedom for LR tests (default 1)")
    cmp_.set_defaults(func=cmd_compare)

    def model_args(sp):
        sp.add_argument("--model", required=True, help="one of: " + ", ".join(MODEL_CODES))
        sp.add_argument("--params", help="name=value list, e.g. alpha=0.5,beta=2,lam=1,delta=3,p=1")
        sp.add_argument("--fit-file", help="JSON-lines file written by fit/compare --out")
        sp.add_argument("--out", help="directory for the CSV series")
        sp.add_argument("--format", choices=("text", "csv", "json-lines"), default="csv")

    q = sub.add_parser("quantile", help="quantile series")
    model_args(q)
    q.add_argument("--q", default="0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9",
                   help="comma-separated probabilities")
    q.set_defaults(func=cmd_quantile)

    s = sub.add_parser("sample", help="random draws")
    model_args(s)
    s.add_argument("--n", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_sample)

    d = sub.add_parser("density", help="pdf and hazard series")
    model_args(d)
    d.add_argument("--grid", default="0.1:10:100", help="LO:HI:COUNT evaluation grid")
    d.add_argument("--x", help="explicit comma-separated points (overrides --grid)")
    d.set_defaults(func=cmd_density)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "level", 0.5) is not None and not (0 < getattr(args, "level", 0.5) < 1):
        parser.error("--level must lie strictly between 0 and 1")
    if getattr(args, "df", 1) < 1:
        parser.error("--df must be at least 1")
    if getattr(args, "restarts", 0) < 0:
        parser.error("--restarts must be nonnegative")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"ggburr {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"ggburr {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"ggburr {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
