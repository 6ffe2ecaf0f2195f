#!/usr/bin/env python3
"""
Hasse CLI
Kommandozeile für Ш(L), die Lösbarkeitsentscheidung von N_{L/Q}(t) = c,
Vertreter der Knotengruppe und den Export/Import von Splitting-Profilen
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from pydantic import ValidationError
from sympy import primefactors

sys.path.append(str(Path(__file__).parent))

from core.abelian_q import AbelianFieldQ, prime_power_part
from core.architecture import EXIT_ERROR, EXIT_OK, VERDICT_EXIT_CODES, ComputationLimits, VerdictKind
from core.brauer import decide, knot_group
from core.cyclic_products import sha_product_cyclic
from core.errors import BadDegree, HasseError, InvariantViolation, MalformedProfile, NoCyclicFactor
from core.oracle import cross_check_verdict, spot_check_profile
from core.sha_core import compute_sha, sha_certificate
from core.splitting import build_profile, export_profile, import_profile, make_context
from core.validation import (
    ComputationRequest,
    DecideRequest,
    KnotRequest,
    format_validation_error,
    parse_field_spec,
    validate_profile_document,
)
from schema.validate_input import PRIME_CASE_SCHEMA, PROFILE_SCHEMA, SHA_GROUP_SCHEMA, VERDICT_SCHEMA, validate_json_schema
from utils.config_manager import ConfigManager

logger = logging.getLogger(__name__)


def format_group(invariant_factors: Sequence[int]) -> str:
    """Z/2Z ⊕ Z/4Z bzw. 0"""
    if not invariant_factors:
        return "0"
    return " ⊕ ".join(f"Z/{d}Z" for d in invariant_factors)


def _emit(data: Dict[str, Any], schema_path: Optional[Path] = None) -> None:
    if schema_path is not None:
        ok, message = validate_json_schema(data, str(schema_path))
        if not ok:
            raise InvariantViolation(f"Ausgabe verletzt {schema_path.name}: {message}")
    print(json.dumps(data, indent=2, ensure_ascii=False))


def _fields(specs: List[str]) -> List[AbelianFieldQ]:
    return [parse_field_spec(spec) for spec in specs]


def resolve_pivot(L: Sequence[AbelianFieldQ], pivot: Optional[int]) -> int:
    """Gewählter Pivot oder der erste zyklische Faktor"""
    if pivot is not None:
        return pivot
    for index, K in enumerate(L):
        if K.is_cyclic():
            return index
    raise NoCyclicFactor("Kein Faktor ist zyklisch")


def cmd_sha(args: argparse.Namespace, limits: ComputationLimits) -> int:
    request = ComputationRequest(factors=args.factor or [], pivot=args.pivot)
    L = _fields(request.factors)
    pivot = resolve_pivot(L, request.pivot)
    sha = compute_sha(L, pivot, limits)
    certificate = sha_certificate(sha)
    cyclic = sha_product_cyclic(L, limits) if all(K.is_cyclic() for K in L) else None
    if cyclic is not None and cyclic.invariant_factors != sha.invariant_factors:
        raise InvariantViolation(
            f"Zyklischer Weg {list(cyclic.invariant_factors)}, Pivot {pivot} {list(sha.invariant_factors)}"
        )
    if args.json:
        data = sha.to_dict()
        data["certificate"] = certificate
        if cyclic is not None:
            for case in cyclic.prime_cases.values():
                ok, message = validate_json_schema(case.to_dict(), str(PRIME_CASE_SCHEMA))
                if not ok:
                    raise InvariantViolation(f"Primgrad-Fall p = {case.p} verletzt das Schema: {message}")
            data["cyclic_products"] = cyclic.to_dict()
        _emit(data, SHA_GROUP_SCHEMA)
        return EXIT_OK
    print(f"✅ Ш(L) ≅ {format_group(sha.invariant_factors)} (Pivot {pivot}: {L[pivot]})")
    for p, component in certificate["components"].items():
        print(f"   p = {p}: {format_group(component['invariant_factors'])}, |G| = {component['group_order']}, "
              f"{component['class_types']} Klassentypen")
        for witness in component["witnesses"]:
            ns = ", ".join(str(c["n"]) for c in witness["covering"])
            print(f"      Erzeuger {witness['generator']} (Ordnung {witness['order']}): n je Klassentyp {ns}")
    if cyclic is not None:
        for p, case in sorted(cyclic.prime_cases.items()):
            print(f"   Primgrad-Fall p = {p}: {case.verdict.value}, m = {case.rank} ({case.reason})")
        for p, reason in sorted(cyclic.zero_reasons.items()):
            print(f"   p = {p}: trivial, {reason}")
    return EXIT_OK


def cmd_decide(args: argparse.Namespace, limits: ComputationLimits, config: ConfigManager) -> int:
    request = DecideRequest(factors=args.factor or [], pivot=args.pivot, c=args.c)
    L = _fields(request.factors)
    pivot = resolve_pivot(L, request.pivot)
    verdict = decide(L, pivot, request.value, limits)
    data = verdict.to_dict()
    data["c"] = str(verdict.c)
    if args.cross_check:
        bound = args.oracle_bound if args.oracle_bound is not None else config.get("oracle.bound")
        data["cross_check"] = cross_check_verdict(
            L, pivot, request.value, bound, limits,
            method=config.get("oracle.method"),
            denominator_bound=config.get("oracle.denominator_bound"),
        )
    if args.json:
        _emit(data, VERDICT_SCHEMA)
    elif verdict.kind == VerdictKind.SOLVABLE:
        print(f"✅ N(t) = {verdict.c} ist global lösbar")
    elif verdict.kind == VerdictKind.OBSTRUCTED:
        values = ", ".join(str(x) for x in verdict.obstruction.values)
        print(f"❌ N(t) = {verdict.c} ist überall lokal, aber nicht global lösbar")
        print(f"   α_c auf den Erzeugern: {values}")
    else:
        print(f"❌ N(t) = {verdict.c} hat keine lokale Lösung an {verdict.witness}")
    if args.cross_check and not args.json:
        check = data["cross_check"]
        found = "gefunden" if check["found"] else "nicht gefunden"
        print(f"   Lösungssuche ({check['method']}, Schranke {check['bound']}): {found}, {check['status']}")
    return VERDICT_EXIT_CODES[verdict.kind]


def cmd_knot(args: argparse.Namespace, limits: ComputationLimits, config: ConfigManager) -> int:
    bound = args.bound if args.bound is not None else config.get("knot.bound")
    request = KnotRequest(factors=args.factor or [], pivot=args.pivot, bound=bound)
    L = _fields(request.factors)
    pivot = resolve_pivot(L, request.pivot)
    result = knot_group(L, pivot, request.bound, limits)
    if args.json:
        _emit(result.to_dict())
        return EXIT_OK
    print(f"✅ {len(result.representatives)} Vertreter nach {result.scanned} Kandidaten")
    for rep in result.representatives:
        print(f"   c = {rep.c}: α_c = {[str(x) for x in rep.character]}")
    if not result.complete:
        print(f"⚠️ Knotengruppe bis Höhe {request.bound} nicht vollständig erzeugt (|Ш| = {result.group_order})")
    return EXIT_OK


def cmd_profile(args: argparse.Namespace, limits: ComputationLimits, config: ConfigManager) -> int:
    if args.profile_in:
        with open(args.profile_in, 'r', encoding='utf-8') as f:
            data = json.load(f)
        check = validate_profile_document(data)
        if not check.valid:
            print(f"❌ Profil in {args.profile_in} ungültig")
            for message in check.errors:
                print(f"   {message}")
            return EXIT_ERROR
        for warning in check.warnings:
            print(f"⚠️ {warning}")
        profile = import_profile(data)
        print(f"✅ Profil gültig: p = {profile.p}, e = {profile.e}, {len(profile.classes)} Klassen")
        return EXIT_OK

    request = ComputationRequest(factors=args.factor or [], pivot=args.pivot)
    L = _fields(request.factors)
    pivot = resolve_pivot(L, request.pivot)
    K = L[pivot]
    primes = [int(q) for q in primefactors(K.degree)]
    p = args.prime if args.prime is not None else (primes[0] if primes else None)
    if p is None or p not in primes:
        raise BadDegree(f"Grad {K.degree} des Pivots hat keinen Primteiler p = {args.prime}")
    ctx = make_context(prime_power_part(K, p), [f for k, f in enumerate(L) if k != pivot])
    profile = build_profile(ctx, limits.granularity, limits)
    data = export_profile(profile)
    ok, message = validate_json_schema(data, str(PROFILE_SCHEMA))
    if not ok:
        raise InvariantViolation(f"Exportiertes Profil verletzt das Schema: {message}")
    budget = args.spot_check if args.spot_check is not None else config.get("oracle.spot_check_budget")
    if budget:
        report = spot_check_profile(profile, budget)
        print(f"✅ Stichprüfung an {len(report.checked)} Primzahlen bestanden", file=sys.stderr)
    if args.profile_out:
        with open(args.profile_out, 'w', encoding='utf-8') as f:
            json.dump(data, f, indent=2, ensure_ascii=False)
        print(f"✅ Profil mit {len(profile.classes)} Klassen in {args.profile_out} gespeichert")
    else:
        print(json.dumps(data, indent=2, ensure_ascii=False))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Hasse-Prinzip für Multinormgleichungen über Q"
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--factor", "-f", action="append",
        help="Körper: quad:D | cyclo:N | cyclosub:N:d | explicit:N:g1,g2 (wiederholbar)"
    )
    common.add_argument("--pivot", type=int, help="Index des zyklischen Pivots (0-basiert)")
    common.add_argument("--json", action="store_true", help="JSON-Ausgabe")
    common.add_argument("--ambient-limit", type=int, help="Grenze für |⊕ Z/p^{e_i}Z|")
    common.add_argument("--modulus-limit", type=int, help="Grenze für |(Z/NZ)^×| pro Profil")
    common.add_argument("--workers", "-w", type=int, help="Anzahl paralleler Threads")
    common.add_argument("--config", help="JSON-Konfigurationsdatei")
    common.add_argument("--verbose", "-v", action="store_true", help="Ausführliches Logging")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("sha", parents=[common], help="Ш(L) berechnen")
    decide_parser = sub.add_parser("decide", parents=[common], help="N(t) = c entscheiden")
    decide_parser.add_argument("--c", required=True, help="c als num/den")
    decide_parser.add_argument("--cross-check", action="store_true", help="Urteil mit der Lösungssuche abgleichen")
    decide_parser.add_argument("--oracle-bound", type=int, help="Schranke der Lösungssuche")
    knot_parser = sub.add_parser("knot", parents=[common], help="Vertreter der Knotengruppe")
    knot_parser.add_argument("--bound", type=int, help="Höhenschranke")
    profile_parser = sub.add_parser("profile", parents=[common], help="Splitting-Profil exportieren/prüfen")
    profile_parser.add_argument("--prime", type=int, help="Primzahl p des Pivot-Anteils")
    profile_parser.add_argument("--profile-out", help="Profil in Datei schreiben")
    profile_parser.add_argument("--profile-in", help="Profil aus Datei lesen und prüfen")
    profile_parser.add_argument("--spot-check", type=int, help="Stichprüfung an n Primzahlen (0 schaltet sie ab)")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Hauptfunktion für Kommandozeilen-Nutzung"""
    args = build_parser().parse_args(argv)
    config = ConfigManager(args.config)
    logging.basicConfig(
        level=config.log_level(args.verbose),
        format="%(asctime)s - %(levelname)s - %(message)s",
    )
    overrides = {
        "limits.modulus": args.modulus_limit,
        "limits.ambient": args.ambient_limit,
        "profile.max_workers": args.workers,
    }
    config.update({key: value for key, value in overrides.items() if value is not None})
    validation = config.validate_config()
    for warning in validation["warnings"]:
        logger.warning(warning)
    if not validation["valid"]:
        for message in validation["errors"]:
            print(f"❌ {message}")
        return EXIT_ERROR
    limits = config.get_limits()

    try:
        if args.command == "sha":
            return cmd_sha(args, limits)
        if args.command == "decide":
            return cmd_decide(args, limits, config)
        if args.command == "knot":
            return cmd_knot(args, limits, config)
        return cmd_profile(args, limits, config)
    except ValidationError as e:
        for message in format_validation_error(e):
            print(f"❌ {message}")
        return EXIT_ERROR
    except MalformedProfile as e:
        print(f"❌ {e.kind}: {e.message}")
        for diagnostic in e.diagnostics:
            print(f"   {diagnostic}")
        return EXIT_ERROR
    except HasseError as e:
        logger.error(f"{e.kind}: {e.message}")
        print(f"❌ {e.kind}: {e.message}")
        return EXIT_ERROR
    except (OSError, json.JSONDecodeError) as e:
        print(f"❌ Datei nicht lesbar: {e}")
        return EXIT_ERROR


if __name__ == "__main__":
    exit(main())
