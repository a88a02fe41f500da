"""Command line front end: config parsing, dispatch and report rendering.

Exit codes: 0 success or match, 1 verified mismatch or failed check,
2 usage or configuration error, 3 internal integrity error.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from typing import Any, Optional

from . import __version__, presets
from .cohomology import line_bundle_cohomology
from .errors import IntegrityError, TiltgenError, UnsupportedError, ValidationError
from .geometry import (Infinitesimal, PointConfiguration, Proper, ProjectiveBundleSpace,
                       ToricSurfaceFan, WeightedProjectiveSpace, build_blowup_surface,
                       hirzebruch_ray_coefficients, rank7_toric_preset, surface_lattice,
                       torus_fixed_b3)
from .lattice import BidegreeClass, DivisorClass, WeightedClass
from .sheaves import ExceptionalTwist, LineBundle
from .tilting import (DEFAULT_P_CAP, Collection, CollectionReport, anticanonical_diagnostics,
                      check_pullback, check_strong_exceptional, check_strongly_cyclic,
                      ext_table, generation_time_report, hom_matrix, zero_pairing_classes)

log = logging.getLogger("tiltgen")

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_INTEGRITY = 0, 1, 2, 3


class ConfigError(ValidationError):
    def __init__(self, errors: list[str]):
        self.errors = errors
        super().__init__("; ".join(errors))


# ---------------------------------------------------------------- config

@dataclass(frozen=True)
class ConfigDocument:
    space_kind: str
    space: tuple                # normalised parameters, see _SPACE_PARSERS
    collection: tuple           # ("line_bundle", coeffs) or ("exceptional_twist", curve, k)
    p_cap: int = DEFAULT_P_CAP
    anticanonical_smooth_member: bool = False

    def build_space(self):
        if self.space_kind == "blowup_p2":
            centers = []
            for c in self.space:
                if c[0] == "coords":
                    centers.append(Proper(c[1]))
                else:
                    centers.append(Infinitesimal(c[1], c[2]))
            return build_blowup_surface(PointConfiguration(tuple(centers)))
        if self.space_kind == "proj_bundle":
            return ProjectiveBundleSpace(*self.space)
        if self.space_kind == "weighted":
            return WeightedProjectiveSpace(self.space)
        return ToricSurfaceFan(self.space)

    def build_collection(self) -> Collection:
        X = self.build_space()
        members = []
        for spec in self.collection:
            if spec[0] == "exceptional_twist":
                members.append(ExceptionalTwist(spec[1], spec[2]))
            else:
                members.append(LineBundle(_class_for(X, spec[1])))
        return Collection(X, tuple(members), self.anticanonical_smooth_member)


def _class_for(X, coeffs):
    if isinstance(X, ProjectiveBundleSpace):
        return BidegreeClass(*coeffs)
    if isinstance(X, WeightedProjectiveSpace):
        return WeightedClass(coeffs[0])
    if isinstance(X, ToricSurfaceFan):
        return X.class_of(coeffs)
    return DivisorClass(coeffs)


def _rational(v, path, errors):
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        errors.append(f"{path}: expected an integer or a 'p/q' string")
        return None
    try:
        q = Fraction(v)
    except (ValueError, ZeroDivisionError):
        errors.append(f"{path}: {v!r} is not a rational 'p/q'")
        return None
    if isinstance(v, str) and "/" in v and int(v.split("/")[1]) <= 0:
        errors.append(f"{path}: denominator must be positive")
        return None
    return q


def _int(v, path, errors, low=None):
    if isinstance(v, bool) or not isinstance(v, int):
        errors.append(f"{path}: expected an integer")
        return None
    if low is not None and v < low:
        errors.append(f"{path}: must be >= {low}")
        return None
    return v


def _keys(obj, allowed, path, errors) -> bool:
    if not isinstance(obj, dict):
        errors.append(f"{path}: expected an object")
        return False
    extra = sorted(set(obj) - set(allowed))
    for k in extra:
        errors.append(f"{path}.{k}: unknown field")
    return not extra


def _parse_space(obj, errors):
    path = "$.space"
    if not isinstance(obj, dict) or len(obj) != 1:
        errors.append(f"{path}: expected exactly one of blowup_p2, proj_bundle, weighted, toric")
        return None, None
    kind, body = next(iter(obj.items()))
    path = f"{path}.{kind}"
    if kind == "blowup_p2":
        if not _keys(body, ("centers",), path, errors):
            return kind, None
        centers = body.get("centers")
        if not isinstance(centers, list):
            errors.append(f"{path}.centers: expected a list")
            return kind, None
        out = []
        for i, c in enumerate(centers):
            cp = f"{path}.centers[{i}]"
            if isinstance(c, dict) and "coords" in c:
                if not _keys(c, ("coords",), cp, errors):
                    continue
                xs = c["coords"]
                if not isinstance(xs, list) or len(xs) != 3:
                    errors.append(f"{cp}.coords: expected three rationals")
                    continue
                vals = [_rational(x, f"{cp}.coords[{j}]", errors) for j, x in enumerate(xs)]
                if None not in vals:
                    out.append(("coords", tuple(vals)))
            elif isinstance(c, dict) and "parent" in c:
                if not _keys(c, ("parent", "tangent"), cp, errors):
                    continue
                parent = _int(c["parent"], f"{cp}.parent", errors, low=0)
                tan = c.get("tangent")
                if not isinstance(tan, list) or len(tan) != 2:
                    errors.append(f"{cp}.tangent: expected two rationals")
                    continue
                vals = [_rational(x, f"{cp}.tangent[{j}]", errors) for j, x in enumerate(tan)]
                if parent is not None and None not in vals:
                    out.append(("parent", parent, tuple(vals)))
            else:
                errors.append(f"{cp}: expected {{coords}} or {{parent, tangent}}")
        if len(out) == len(centers):
            try:
                build_blowup_surface(PointConfiguration(tuple(
                    Proper(c[1]) if c[0] == "coords" else Infinitesimal(c[1], c[2]) for c in out)))
            except ValidationError as e:
                errors.append(f"{path}.centers: {e}")
        return kind, tuple(out)
    if kind == "proj_bundle":
        if not _keys(body, ("m", "n"), path, errors):
            return kind, None
        m = _int(body.get("m"), f"{path}.m", errors, low=0)
        n = _int(body.get("n"), f"{path}.n", errors, low=1)
        return kind, (m, n)
    if kind == "weighted":
        if not _keys(body, ("weights",), path, errors):
            return kind, None
        ws = body.get("weights")
        if not isinstance(ws, list) or len(ws) < 2:
            errors.append(f"{path}.weights: expected at least two positive integers")
            return kind, None
        return kind, tuple(_int(w, f"{path}.weights[{i}]", errors, low=1) for i, w in enumerate(ws))
    if kind == "toric":
        if not _keys(body, ("rays",), path, errors):
            return kind, None
        rays = body.get("rays")
        if not isinstance(rays, list):
            errors.append(f"{path}.rays: expected a list of integer pairs")
            return kind, None
        out = []
        for i, r in enumerate(rays):
            if not isinstance(r, list) or len(r) != 2:
                errors.append(f"{path}.rays[{i}]: expected an integer pair")
                continue
            out.append(tuple(_int(x, f"{path}.rays[{i}][{j}]", errors) for j, x in enumerate(r)))
        if len(out) == len(rays) and not errors:
            try:
                ToricSurfaceFan(tuple(out))
            except ValidationError as e:
                errors.append(f"{path}.rays: {e}")
        return kind, tuple(out)
    errors.append(f"{path}: unknown space kind")
    return None, None


def _class_length(kind, space):
    if kind == "blowup_p2":
        return len(space) + 1
    if kind == "proj_bundle":
        return 2
    if kind == "weighted":
        return 1
    return len(space)


def parse_config(text: str) -> ConfigDocument:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError([f"$: malformed JSON at line {e.lineno} column {e.colno}: {e.msg}"])
    errors: list[str] = []
    if not _keys(obj, ("space", "collection", "options"), "$", errors) and not isinstance(obj, dict):
        raise ConfigError(errors)
    if "space" not in obj:
        errors.append("$.space: missing")
        raise ConfigError(errors)
    kind, space = _parse_space(obj["space"], errors)
    coll = obj.get("collection", [])
    members = []
    if not isinstance(coll, list) or not coll:
        errors.append("$.collection: expected a nonempty list")
        coll = []
    for i, m in enumerate(coll):
        mp = f"$.collection[{i}]"
        if isinstance(m, dict) and "line_bundle" in m and _keys(m, ("line_bundle",), mp, errors):
            v = m["line_bundle"]
            if not isinstance(v, list):
                errors.append(f"{mp}.line_bundle: expected an integer list")
                continue
            vals = tuple(_int(x, f"{mp}.line_bundle[{j}]", errors) for j, x in enumerate(v))
            if space is not None and kind and len(vals) != _class_length(kind, space):
                errors.append(f"{mp}.line_bundle: expected {_class_length(kind, space)} coefficients")
            members.append(("line_bundle", vals))
        elif isinstance(m, dict) and "exceptional_twist" in m and _keys(m, ("exceptional_twist",), mp, errors):
            v = m["exceptional_twist"]
            if not _keys(v, ("curve", "k"), f"{mp}.exceptional_twist", errors):
                continue
            if kind != "blowup_p2":
                errors.append(f"{mp}: exceptional twists need a blowup_p2 space")
                continue
            curve = _int(v.get("curve"), f"{mp}.exceptional_twist.curve", errors, low=1)
            k = _int(v.get("k", 0), f"{mp}.exceptional_twist.k", errors)
            if curve is not None and space is not None and curve > len(space):
                errors.append(f"{mp}.exceptional_twist.curve: only {len(space)} curves")
            members.append(("exceptional_twist", curve, k))
        elif not (isinstance(m, dict) and set(m) & {"line_bundle", "exceptional_twist"}):
            errors.append(f"{mp}: expected {{line_bundle}} or {{exceptional_twist}}")
    opts = obj.get("options", {})
    p_cap, smooth = DEFAULT_P_CAP, False
    if _keys(opts, ("p_cap", "anticanonical_smooth_member"), "$.options", errors):
        if "p_cap" in opts:
            p_cap = _int(opts["p_cap"], "$.options.p_cap", errors, low=1)
        if "anticanonical_smooth_member" in opts:
            smooth = opts["anticanonical_smooth_member"]
            if not isinstance(smooth, bool):
                errors.append("$.options.anticanonical_smooth_member: expected a boolean")
    if errors:
        raise ConfigError(errors)
    doc = ConfigDocument(kind, space, tuple(members), p_cap, smooth)
    try:
        doc.build_collection()
    except TiltgenError as e:
        raise ConfigError([f"$.collection: {e}"])
    return doc


def _frac_text(q: Fraction) -> str:
    return str(q)


def render_config(doc: ConfigDocument) -> str:
    if doc.space_kind == "blowup_p2":
        centers = []
        for c in doc.space:
            if c[0] == "coords":
                centers.append({"coords": [_frac_text(x) for x in c[1]]})
            else:
                centers.append({"parent": c[1], "tangent": [_frac_text(x) for x in c[2]]})
        space = {"blowup_p2": {"centers": centers}}
    elif doc.space_kind == "proj_bundle":
        space = {"proj_bundle": {"m": doc.space[0], "n": doc.space[1]}}
    elif doc.space_kind == "weighted":
        space = {"weighted": {"weights": list(doc.space)}}
    else:
        space = {"toric": {"rays": [list(r) for r in doc.space]}}
    coll = []
    for spec in doc.collection:
        if spec[0] == "line_bundle":
            coll.append({"line_bundle": list(spec[1])})
        else:
            coll.append({"exceptional_twist": {"curve": spec[1], "k": spec[2]}})
    out = {"space": space, "collection": coll,
           "options": {"p_cap": doc.p_cap, "anticanonical_smooth_member": doc.anticanonical_smooth_member}}
    return json.dumps(out, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------- reports

@dataclass
class ReportDocument:
    kind: str
    body: dict
    provenance: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps({"kind": self.kind, "report": self.body, "provenance": self.provenance},
                          indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ReportDocument":
        obj = json.loads(text)
        return cls(obj["kind"], obj["report"], obj["provenance"])


def _provenance(source: str, timestamp: bool) -> dict:
    out = {"config_sha256": hashlib.sha256(source.encode()).hexdigest(),
           "engine": f"tiltgen {__version__}"}
    if timestamp:
        out["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return out


def report_to_dict(r: CollectionReport) -> dict:
    d = asdict(r)
    d["generation_time"] = r.generation_time
    return d


def _describe(C: Collection, m) -> str:
    if isinstance(m, ExceptionalTwist):
        return f"O_E{m.curve}({m.k})"
    cls = m.cls
    if isinstance(cls, BidegreeClass):
        return f"O({cls.a}S+{cls.b}H)"
    if isinstance(cls, WeightedClass):
        return f"O({cls.k})"
    return f"O({surface_lattice(C.space).format(cls)})"


# ---------------------------------------------------------------- commands

def _load(args) -> tuple[ConfigDocument, str]:
    if not args.config:
        raise ConfigError(["--config is required for this command"])
    try:
        with open(args.config, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise ConfigError([f"cannot read {args.config}: {e.strerror}"])
    return parse_config(text), text


def _emit(args, doc: ReportDocument, text_lines: list[str]) -> None:
    if args.json:
        sys.stdout.write(doc.to_json())
    else:
        for line in text_lines:
            print(line)
        if "timestamp" in doc.provenance:
            print(f"# {doc.provenance['engine']}  config {doc.provenance['config_sha256'][:12]}  "
                  f"{doc.provenance['timestamp']}")


def cmd_cohomology(args) -> int:
    cfg, src = _load(args)
    C = cfg.build_collection()
    rows, lines = [], []
    for m in C.members:
        if not isinstance(m, LineBundle):
            continue
        h = list(line_bundle_cohomology(C.space, m.cls).h)
        rows.append({"sheaf": _describe(C, m), "h": h})
        lines.append(f"{_describe(C, m):28s} h = {tuple(h)}")
    _emit(args, ReportDocument("cohomology", {"classes": rows}, _provenance(src, not args.json)), lines)
    return EXIT_OK


def cmd_ext(args) -> int:
    cfg, src = _load(args)
    C = cfg.build_collection()
    table = ext_table(C)
    names = [_describe(C, m) for m in C.members]
    lines = [f"Ext^*({names[i]}, {names[j]}) = {table[i][j].h}"
             for i in range(len(C)) for j in range(len(C))]
    body = {"members": names, "ext_table": [[list(h.h) for h in row] for row in table]}
    _emit(args, ReportDocument("ext", body, _provenance(src, not args.json)), lines)
    return EXIT_OK


def cmd_check(args) -> int:
    cfg, src = _load(args)
    C = cfg.build_collection()
    strong, w = check_strong_exceptional(C)
    cyclic, cw = check_strongly_cyclic(C)
    pb = check_pullback(C, args.p_cap or cfg.p_cap)
    body = {"strong_exceptional": strong, "exceptional_witness": w and asdict(w),
            "strongly_cyclic": cyclic, "cyclic_witness": cw and asdict(cw), "pullback": asdict(pb)}
    lines = [f"strong exceptional: {strong}" + (f"  (first violation {w})" if w else ""),
             f"strongly cyclic:    {cyclic}" + (f"  (first violation {cw})" if cw else ""),
             f"pullback:           {pb.status} at p = {pb.p_reached}"
             + (f"  [{pb.certificate}]" if pb.certificate else "")]
    _emit(args, ReportDocument("check", body, _provenance(src, not args.json)), lines)
    return EXIT_OK if strong else EXIT_MISMATCH


def cmd_gentime(args) -> int:
    cfg, src = _load(args)
    C = cfg.build_collection()
    r = generation_time_report(C, args.p_cap or cfg.p_cap)
    lines = [f"strong exceptional: {r.strong_exceptional}",
             f"i0:                 {r.i0}",
             f"generation time:    {r.hochschild_dim}  (dim {r.dim_space} + i0; bounds {r.lower_bound}..{r.upper_bound})",
             f"strongly cyclic:    {r.strongly_cyclic}",
             f"pullback:           {r.pullback.status}"]
    _emit(args, ReportDocument("gentime", report_to_dict(r), _provenance(src, not args.json)), lines)
    return EXIT_OK


_SWEEP_SPACES = ("f1", "f2", "f3", "f4", "f5", "f6", "b3", "rank7")


def cmd_oracle_compare(args) -> int:
    from . import sweep
    k = args.range if args.range is not None else 5
    if k < 0:
        raise ConfigError(["--range must be nonnegative"])
    if args.space.startswith("f"):
        res = sweep.sweep_hirzebruch(int(args.space[1:]), k)
    elif args.space == "b3":
        res = sweep.sweep_blowup_model(torus_fixed_b3(), k, "B3")
    else:
        res = sweep.sweep_blowup_model(rank7_toric_preset(), k, "rank7")
    body = {"space": args.space, "range": k, "checked": res.checked,
            "discrepancies": res.n_discrepancies, "serre_pairs": res.serre_pairs,
            "serre_violations": len(res.serre_violations), "euler_violations": len(res.euler_violations),
            "examples": [list(map(str, d)) for d in res.discrepancies[:5]]}
    _emit(args, ReportDocument("oracle-compare", body, _provenance(args.space, not args.json)),
          [res.summary()])
    return EXIT_OK if res.ok else EXIT_MISMATCH


PRESETS = ("t1", "t2", "delpezzo7", "rank7-toric", "hirzebruch", "weighted", "quiver-f4")


def reproduce_preset(name: str, p_cap: int = DEFAULT_P_CAP) -> ReportDocument:
    """Run one named experiment; ``body["mismatches"]`` lists every disagreement."""
    if name not in PRESETS:
        raise ConfigError([f"unknown preset {name!r}; choose from {', '.join(PRESETS)}"])
    exp = presets.expected(name)
    mism: list[str] = []
    body: dict[str, Any] = {"claim": exp["claim"]}

    def compare(key, got, want):
        body.setdefault("results", {})[key] = got
        if got != want:
            mism.append(f"{key}: got {got!r}, expected {want!r}")

    if name == "t1":
        spaces = {f"B{t}": presets.general_blowup(t) for t in range(6)}
        spaces["B3-collinear"] = presets.collinear_b3()
        for key, X in spaces.items():
            r = generation_time_report(presets.t1(X), p_cap, with_pullback=False)
            compare(key, r.generation_time, exp["generation_time"][key])
    elif name == "t2":
        for t in range(1, 6):
            r = generation_time_report(presets.t2(presets.general_blowup(t)), p_cap, with_pullback=False)
            compare(f"B{t}", r.generation_time, exp["generation_time"][f"B{t}"])
    elif name in ("delpezzo7", "rank7-toric"):
        C = presets.t3() if name == "delpezzo7" else presets.rank7_collection()
        r = generation_time_report(C, p_cap)
        L = C.space.lattice
        compare("generation_time", r.generation_time, exp["generation_time"])
        compare("pullback", r.pullback.status, exp["pullback"])
        if name == "rank7-toric":
            compare("strong_exceptional", r.strong_exceptional, exp["strong_exceptional"])
            compare("i0", r.i0, exp["i0"])
            compare("strongly_cyclic", r.strongly_cyclic, exp["strongly_cyclic"])
        zero = sorted(L.format(D) for D in zero_pairing_classes(C))
        compare("zero_pairing_classes", zero, sorted(exp["zero_pairing_classes"]))
    elif name == "hirzebruch":
        lo_m, hi_m = exp["m_range"]
        lo_n, hi_n = exp["n_range"]
        for m in range(lo_m, hi_m + 1):
            for n in range(lo_n, hi_n + 1):
                r = generation_time_report(presets.hirzebruch_collection(m, n), p_cap, with_pullback=False)
                compare(f"X{m},{n}", r.generation_time, n + 1 if m < n + 2 else 2 * n + 1)
                diag = anticanonical_diagnostics(ProjectiveBundleSpace(m, n))
                compare(f"X{m},{n} h^n(-K) != 0", diag.h[n] != 0, m >= 2 * n + 2)
    elif name == "weighted":
        for w in presets.WEIGHTS:
            key = ",".join(map(str, w))
            r = generation_time_report(presets.weighted_collection(w), p_cap, with_pullback=False)
            compare(f"{key} i0", r.i0, 0)
            compare(key, r.generation_time, exp["generation_time"][key])
    else:
        a, b = presets.quiver_f4()
        compare("P(1,1,4)", hom_matrix(a), exp["hom_matrix"])
        compare("F4", hom_matrix(b), exp["hom_matrix"])
    body["mismatches"] = mism
    return ReportDocument(f"reproduce {name}", body, {"preset": name, "engine": f"tiltgen {__version__}"})


def cmd_reproduce(args) -> int:
    doc = reproduce_preset(args.preset, args.p_cap or DEFAULT_P_CAP)
    lines = [f"{args.preset}: {doc.body['claim']}"]
    for k, v in doc.body.get("results", {}).items():
        lines.append(f"  {k:28s} {v}")
    lines += [f"  MISMATCH {m}" for m in doc.body["mismatches"]]
    lines.append("  match" if not doc.body["mismatches"] else f"  {len(doc.body['mismatches'])} mismatches")
    if not args.json:
        doc.provenance["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
        doc.provenance["config_sha256"] = hashlib.sha256(args.preset.encode()).hexdigest()
    _emit(args, doc, lines)
    return EXIT_MISMATCH if doc.body["mismatches"] else EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError([message])


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON configuration file")
    common.add_argument("--json", action="store_true", help="emit a machine-readable report")
    common.add_argument("--range", type=int, help="coefficient range for sweeps")
    common.add_argument("--p-cap", type=int, dest="p_cap", help="cap for the pullback sweep")
    common.add_argument("--verbose", action="store_true")
    p = _Parser(prog="tiltgen", description="Exact cohomology and tilting checks on rational surfaces "
                                           "and related spaces.", parents=[common])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, fn in (("cohomology", cmd_cohomology), ("ext", cmd_ext), ("check", cmd_check),
                     ("gentime", cmd_gentime)):
        sp = sub.add_parser(name, parents=[common])
        sp.set_defaults(func=fn)
    sp = sub.add_parser("oracle-compare", parents=[common])
    sp.add_argument("--space", choices=_SWEEP_SPACES, required=True)
    sp.set_defaults(func=cmd_oracle_compare)
    sp = sub.add_parser("reproduce", parents=[common])
    sp.add_argument("preset", choices=PRESETS)
    sp.set_defaults(func=cmd_reproduce)
    return p


def run_command(argv: Optional[list[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except ConfigError as e:
        print(f"tiltgen: {e}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.p_cap is not None and args.p_cap < 1:
        print("tiltgen: --p-cap must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except ConfigError as e:
        for msg in e.errors:
            print(f"tiltgen: {msg}", file=sys.stderr)
        return EXIT_USAGE
    except IntegrityError as e:
        print(f"tiltgen: integrity error: {e}", file=sys.stderr)
        return EXIT_INTEGRITY
    except (ValidationError, UnsupportedError) as e:
        print(f"tiltgen: {e}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run_command())
