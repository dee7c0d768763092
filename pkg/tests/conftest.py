import pytest

from config.settings import RunConfig
from src.bidouble import BidoubleQuotient
from src.deformation import DeformationBuilder
from src.ideal_ops import IdealOperations
from src.poly_parser import parse_polynomial
from src.resolution import ResolutionBuilder
from src.singular import SingularityAnalyzer
from src.standard_basis import StandardBasisEngine
from src.surfaces import SurfaceCalculator


def poly(source: str, variables: str = "x,y,z"):
    """Многочлен из строки в грамматике CLI"""
    return parse_polynomial(source, variables).parsed


@pytest.fixture
def config():
    return RunConfig()


@pytest.fixture
def engine(config):
    return StandardBasisEngine(config)


@pytest.fixture
def ops(config, engine):
    return IdealOperations(config, engine)


@pytest.fixture
def analyzer(config, ops):
    return SingularityAnalyzer(config, ops)


@pytest.fixture
def deformations(config, analyzer):
    return DeformationBuilder(config, analyzer)


@pytest.fixture
def resolutions(config, deformations):
    return ResolutionBuilder(config, deformations)


@pytest.fixture
def quotients(config, ops):
    return BidoubleQuotient(config, ops)


@pytest.fixture
def surfaces(config, ops):
    return SurfaceCalculator(config, ops)
