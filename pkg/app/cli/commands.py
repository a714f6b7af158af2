"""
Command Handlers

One synchronous handler per sub-command. Each takes a loaded input and the
run context, writes its CSV grids, and returns the JSON-lines records for
that input. Handlers are pure apart from the grid files they write.
"""

from pathlib import Path
from typing import Callable, Dict, List, Optional

from pydantic import BaseModel

from app.cli.emit import emit_curve, emit_grid
from app.config import ToleranceSettings, config
from app.ds.meromorphic import PolarizedMeromorphic, to_spec
from app.ds.series import TruncatedSeries
from app.exceptions import NonConvergence, SpecParseError
from app.lab.area import (
    complement_area_series,
    dirichlet_integral,
    sample_image_curve,
    simple_pole_closed_form,
)
from app.lab.certify import (
    certify_hadamard,
    check_area_coefficient_bound,
    check_area_inequality,
    check_first_coefficient,
    check_omega_derivative_bound,
    check_sufficient_membership,
    hadamard_product,
)
from app.lab.extension import (
    build_extension,
    extremal_extension,
    injectivity_sample_check,
    seam_gap,
    sup_dilatation,
)
from app.lab.harmonic import (
    bilipschitz_sample_check,
    check_extension_condition,
    co_lipschitz_estimate,
    sup_omega_f,
)
from app.lab.schwarzian import check_schwarzian_bound, f0_series, fp_map, schwarzian_norm
from app.logger import logger
from app.models.spec_files import LoadedInput
from app.schema import Certificate, Command, ExteriorRule


class RunContext(BaseModel):
    seed: int
    tolerances: ToleranceSettings
    output_dir: Path

    class Config:
        frozen = True


def _stem(index: int, loaded: LoadedInput) -> str:
    return f"{index:03d}_{Path(loaded.path).stem}"


def _certificate_record(certificate: Certificate, loaded: LoadedInput) -> dict:
    if not certificate.inputs_digest:
        certificate = certificate.model_copy(update={"inputs_digest": loaded.digest})
    return {"kind": "certificate", "input": loaded.path, **certificate.to_record()}


def _require_function(loaded: LoadedInput) -> PolarizedMeromorphic:
    if loaded.function is None:
        raise SpecParseError(
            loaded.path, "family.name", f"family '{loaded.family.name}' has no meromorphic form"
        )
    return loaded.function


def _require_k(loaded: LoadedInput, name: str = "k") -> float:
    value = getattr(loaded.params, name)
    if value is None and name == "k" and loaded.family is not None:
        value = loaded.family.k
    if value is None:
        raise SpecParseError(loaded.path, f"params.{name}", "required by this command")
    return value


def run_area(index: int, loaded: LoadedInput, context: RunContext) -> List[dict]:
    f = _require_function(loaded)
    r = loaded.params.r
    report = complement_area_series(f, r)
    if report.tail_estimate > context.tolerances.area_tail:
        raise NonConvergence(
            f"{loaded.path}: area tail {report.tail_estimate:.3g} exceeds {context.tolerances.area_tail:g}"
        )
    record = {
        "kind": "area_report",
        "input": loaded.path,
        "inputs_digest": loaded.digest,
        "dirichlet_integral": dirichlet_integral(f, r),
        **report.to_record(),
    }
    if f.m == 1:
        record["closed_form"] = simple_pole_closed_form(f, r)

    theta, values = sample_image_curve(f, r, config.area.curve_samples)
    emit_curve(theta, values, context.output_dir / f"{_stem(index, loaded)}_curve.csv")
    return [record]


def run_certify(index: int, loaded: LoadedInput, context: RunContext) -> List[dict]:
    f = _require_function(loaded)
    k = _require_k(loaded)
    tol = context.tolerances
    certificates: List[Certificate] = []
    for criterion in loaded.params.criteria:
        if criterion == "area":
            certificates.extend(check_area_inequality(f, k, tol))
        elif criterion == "first_coefficient":
            certificates.append(check_first_coefficient(f, k, tol))
        elif criterion == "sufficient":
            certificates.append(check_sufficient_membership(f, k, tol))
        elif criterion == "area_coefficient":
            certificates.append(check_area_coefficient_bound(f, k, tol))
        elif criterion == "omega_derivative":
            certificates.append(check_omega_derivative_bound(f, f.taylor, k, tol))
    return [_certificate_record(c, loaded) for c in certificates]


def _extremal_tail_requested(loaded: LoadedInput) -> bool:
    if loaded.params.rule is not None:
        return loaded.params.rule == ExteriorRule.EXTREMAL_TAIL
    return loaded.family is not None and loaded.family.name == "extremal_extension"


def run_extend(index: int, loaded: LoadedInput, context: RunContext) -> List[dict]:
    f = _require_function(loaded)
    k = _require_k(loaded)
    tol = context.tolerances
    records: List[dict] = []

    if _extremal_tail_requested(loaded):
        a = f.taylor.coefficients
        a0 = complex(a[0])
        a1 = complex(a[1]) if a.size > 1 else 0j
        E = extremal_extension(f.principal, a0, a1, k)
    else:
        omega: Optional[TruncatedSeries] = None
        if loaded.params.omega is not None:
            omega = TruncatedSeries(coefficients=[complex(re, im) for re, im in loaded.params.omega])
        dilation = loaded.params.dilation
        dilation = config.extension.omega_dilation if dilation is None else dilation
        E = build_extension(f, omega, k, dilation, tol)
        records.append(_certificate_record(check_omega_derivative_bound(f, E.omega, k, tol), loaded))

    field = sup_dilatation(E)
    emit_grid(field, context.output_dir / f"{_stem(index, loaded)}_dilatation.csv")
    injectivity = injectivity_sample_check(E, pairs=loaded.params.pairs, seed=context.seed, tol=tol)
    summary = {
        "kind": "extension",
        "input": loaded.path,
        "inputs_digest": loaded.digest,
        "exterior_rule": E.exterior_rule,
        "k": E.k,
        "kappa": E.kappa,
        "omega_sup": E.omega_sup,
        "nondegeneracy": E.nondegeneracy.to_record() if E.nondegeneracy else None,
        "seam_gap": seam_gap(E),
        "dilatation": field.to_record(),
    }
    injectivity_record = {"kind": "injectivity", "input": loaded.path, **injectivity.to_record()}
    return [summary, injectivity_record] + records


def run_schwarzian(index: int, loaded: LoadedInput, context: RunContext) -> List[dict]:
    family = loaded.family
    if family is not None and family.name == "schwarzian_f0":
        fmap, k, p = f0_series(family.k, family.N), family.k, 0.0
    elif family is not None and family.name == "schwarzian_fp":
        fmap, k, p = fp_map(family.k, family.p, family.N), family.k, family.p
    else:
        fmap = _require_function(loaded)
        k = _require_k(loaded)
        p = fmap.p if loaded.params.p is None else loaded.params.p

    report = schwarzian_norm(fmap, tol=context.tolerances)
    certificate = check_schwarzian_bound(fmap, k, p, context.tolerances, report)
    emit_grid(report, context.output_dir / f"{_stem(index, loaded)}_schwarzian.csv")
    return [
        {"kind": "schwarzian_norm", "input": loaded.path, **report.to_record()},
        _certificate_record(certificate, loaded),
    ]


def run_hadamard(index: int, loaded: LoadedInput, context: RunContext) -> List[dict]:
    k1, k2 = _require_k(loaded, "k1"), _require_k(loaded, "k2")
    left, right = loaded.hadamard
    spec = hadamard_product(left, right)
    certificate = certify_hadamard(spec, k1, k2, context.tolerances)
    return [
        {"kind": "hadamard_product", "input": loaded.path, "product": to_spec(spec.product)},
        _certificate_record(certificate, loaded),
    ]


def run_harmonic(index: int, loaded: LoadedInput, context: RunContext) -> List[dict]:
    k = _require_k(loaded)
    spec, eta = loaded.harmonic, loaded.eta
    tol = context.tolerances
    estimate = co_lipschitz_estimate(eta, spec.domain, tol=tol)
    certificate = check_extension_condition(spec, eta, k, tol=tol, estimate=estimate)
    omega_sup, omega_argmax = sup_omega_f(spec)
    bilipschitz = bilipschitz_sample_check(
        spec, eta, k, pairs=loaded.params.pairs, seed=context.seed, estimate=estimate, tol=tol
    )
    return [
        {
            "kind": "harmonic_estimate",
            "input": loaded.path,
            "co_lipschitz": estimate.to_record(),
            "sup_omega_f": omega_sup,
            "sup_omega_f_argmax": omega_argmax,
        },
        _certificate_record(certificate, loaded),
        {"kind": "bilipschitz", "input": loaded.path, **bilipschitz.to_record()},
    ]


HANDLERS: Dict[Command, Callable[[int, LoadedInput, RunContext], List[dict]]] = {
    Command.AREA: run_area,
    Command.CERTIFY: run_certify,
    Command.EXTEND: run_extend,
    Command.SCHWARZIAN: run_schwarzian,
    Command.HADAMARD: run_hadamard,
    Command.HARMONIC: run_harmonic,
}


def handle(command: Command, index: int, loaded: LoadedInput, context: RunContext) -> List[dict]:
    logger.info(f"[{command.value}] {loaded.path}")
    return HANDLERS[command](index, loaded, context)
