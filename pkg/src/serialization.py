import json
import math
from enum import Enum
from fractions import Fraction
from functools import singledispatch
from typing import Any, Dict, List

from src.bidouble import InvariantRingPresentation, QuotientResult
from src.deformation import DeformationFamily, ScannedPoint
from src.ideal_ops import SmoothnessCertificate
from src.polynomial import Polynomial
from src.resolution import Chart, ChartedVariety, RootBase
from src.singular import BurnsWahlData, DynkinData, SingularityReport, T1Presentation
from src.standard_basis import Ideal
from src.surfaces import (
    DoubleCoverInvariants,
    NodalBounds,
    NodalRecord,
    NodeCount,
    SegreSurface,
    SurfaceInvariants,
    WeightedCatalogEntry,
)
from src.weyl import ADEType

# целые за пределами точного диапазона double пишутся строкой
SAFE_INTEGER = 2 ** 53


def dumps(payload: Dict[str, Any]) -> str:
    return json.dumps(to_json(payload), ensure_ascii=False, indent=2)


@singledispatch
def to_json(value: Any) -> Any:
    if value is None or isinstance(value, (str, bool)):
        return value
    raise TypeError(f"Нет JSON-представления для {type(value).__name__}")


@to_json.register
def _(value: bool) -> bool:
    return value


@to_json.register
def _(value: int) -> Any:
    return value if abs(value) < SAFE_INTEGER else str(value)


@to_json.register
def _(value: float) -> Any:
    if value == math.inf:
        return "infinite"
    return value


@to_json.register
def _(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@to_json.register
def _(value: Enum) -> str:
    return value.value


@to_json.register(list)
@to_json.register(tuple)
def _(value) -> List:
    return [to_json(v) for v in value]


@to_json.register
def _(value: dict) -> Dict:
    return {str(k): to_json(v) for k, v in value.items()}


@to_json.register
def _(value: Polynomial) -> str:
    return value.to_string()


@to_json.register
def _(value: Ideal) -> List[str]:
    return value.to_strings()


@to_json.register
def _(value: ADEType) -> str:
    return str(value)


@to_json.register
def _(value: DynkinData) -> Dict:
    return {
        'vertices': value.vertices,
        'weyl_order': str(value.weyl_order),
        'weyl_name': value.weyl_name,
        'certified_by_enumeration': value.certified_by_enumeration,
    }


@to_json.register
def _(value: SingularityReport) -> Dict:
    return {
        'variables': list(value.ring.names),
        'mu': to_json(value.mu),
        'tau': value.tau,
        't1_basis': to_json(value.t1_monomials()),
        'corank': value.corank,
        'ade': to_json(value.ade),
        'dynkin': to_json(value.dynkin),
    }


@to_json.register
def _(value: BurnsWahlData) -> Dict:
    return {
        'singularities': to_json(value.singularities),
        'nu': value.nu,
        'total_weyl_order': str(value.total_weyl_order),
    }


@to_json.register
def _(value: T1Presentation) -> Dict:
    return {
        'tau': value.tau,
        'components': value.components,
        'presentation': value.description,
        'jacobian_columns': [to_json(list(c)) for c in value.columns],
        'basis': [to_json(list(v)) for v in value.representatives()],
    }


@to_json.register
def _(value: DeformationFamily) -> Dict:
    return {
        'ambient_vars': list(value.ambient.names),
        'parameters': list(value.parameters),
        'equations': to_json(value.equations),
        'basis': [to_json(list(v)) for v in value.basis],
    }


@to_json.register
def _(value: ScannedPoint) -> Dict:
    if value.is_rational:
        return {
            'kind': 'rational',
            'point': to_json(value.coordinates),
            'point_ideal': to_json(value.point_ideal),
            'report': to_json(value.report),
            't1': to_json(value.t1),
        }
    return {
        'kind': 'cluster',
        'ideal': to_json(value.cluster),
        'residue_degree': value.residue_degree,
        'length': value.length,
    }


@to_json.register
def _(value: SmoothnessCertificate) -> Dict:
    return {
        'verdict': value.verdict.value,
        'witness': to_json(value.witness),
        'eliminated': list(value.eliminated),
        'note': value.note,
    }


@to_json.register
def _(value: Chart) -> Dict:
    return {
        'name': value.name,
        'variables': list(value.ideal.ring.names),
        'ideal': to_json(value.ideal),
        'expected_dim': value.expected_dim,
        'certificate': to_json(value.certificate),
    }


@to_json.register
def _(value: ChartedVariety) -> Dict:
    return {
        'charts': to_json(value.charts),
        'gluing_note': value.gluing_note,
        'base_parameters': list(value.base_parameters),
    }


@to_json.register
def _(value: RootBase) -> Dict:
    return {
        'n': value.n,
        'root_vars': list(value.root_vars),
        'alphas': to_json(value.alphas()),
    }


@to_json.register
def _(value: InvariantRingPresentation) -> Dict:
    return {
        'generators': [{'name': name, 'monomial': to_json(m)} for name, m in value.generators()],
        'relations': to_json(value.relations),
    }


@to_json.register
def _(value: QuotientResult) -> Dict:
    return {
        'ideal': to_json(value.ideal),
        'elimination': to_json(value.elimination),
        'certified': value.certified,
    }


@to_json.register
def _(value: SurfaceInvariants) -> Dict:
    return {'chi': value.chi, 'k2': value.k2, 'pg': value.pg, 'q': value.q, 'h0_theta': value.h0_theta}


@to_json.register
def _(value: NodalRecord) -> Dict:
    return {'d': value.d, 'mu_known': value.mu_known, 'witness_name': value.witness_name}


@to_json.register
def _(value: NodalBounds) -> Dict:
    return {
        'd': value.d,
        'severi': value.severi,
        'segre': value.segre,
        'chmutov_low': to_json(value.chmutov_low),
        'miyaoka_high': to_json(value.miyaoka_high),
        'record': to_json(value.record),
        'severi_caveat': value.severi_caveat,
    }


@to_json.register
def _(value: SegreSurface) -> Dict:
    return {
        'd': value.d,
        'seed': value.seed,
        'attempts': value.attempts,
        'linear_forms': to_json(value.linear_forms),
        'half_form': to_json(value.half_form),
        'equation': to_json(value.equation),
        'expected_nodes': value.expected_nodes,
    }


@to_json.register
def _(value: NodeCount) -> Dict:
    return {
        'count': value.count,
        'all_a1': value.all_a1,
        'raw_colength': value.raw_colength,
        'per_chart': list(value.per_chart),
    }


@to_json.register
def _(value: DoubleCoverInvariants) -> Dict:
    return {'invariants': to_json(value.invariants), 'moduli_dim': value.moduli_dim}


@to_json.register
def _(value: WeightedCatalogEntry) -> Dict:
    return {
        'family': value.family,
        'weights': list(value.weights),
        'degree': value.degree,
        'singularities': to_json(value.singularities),
        'parameters': to_json(value.parameters),
    }
