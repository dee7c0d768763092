import argparse
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, TextIO, Tuple

# Добавляем корневую директорию в путь
sys.path.append(str(Path(__file__).parent))

from config.settings import OUTPUT_FORMATS, SETTINGS, RunConfig
from src.bidouble import STANDARD_TARGET, BidoubleQuotient, DiagonalAction
from src.deformation import DeformationBuilder
from src.poly_parser import parse_polynomial, parse_variables
from src.resolution import ChartedVariety, ResolutionBuilder
from src.serialization import dumps, to_json
from src.singular import SingularityAnalyzer, SingularityReport
from src.standard_basis import Ideal
from src.surfaces import CatalogQuery, SurfaceCalculator, SurfaceInvariants
from utils.errors import DefkitError, InvalidArgumentError
from utils.helpers import FormatHelpers, SystemHelpers

logger = logging.getLogger("defkit")

DEFAULT_BIDOUBLE_EQUATION = "w^2 - u*v - t"


class CliUsageError(Exception):
    """Ошибка разбора аргументов (код выхода 2)"""


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise CliUsageError(message)


def _add_global_flags(parser: argparse.ArgumentParser, nested: bool) -> None:
    # во вложенных парсерах SUPPRESS, чтобы флаг до подкоманды не затирался
    default = argparse.SUPPRESS if nested else None
    parser.add_argument("--format", choices=OUTPUT_FORMATS, default=default, help="формат отчета")
    parser.add_argument("--seed", type=int, default=default, help="зерно генератора")
    parser.add_argument("--max-basis", type=int, default=default, help="лимит элементов базиса")
    parser.add_argument("--max-saturation", type=int, default=default, help="лимит итераций насыщения")
    parser.add_argument("--jet-cap", type=int, default=default, help="предельная степень струй")
    parser.add_argument("--chart-cap", type=int, default=default, help="предельное n для разрешения A_n")
    parser.add_argument("--log-level", default=default, help="уровень логирования")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="defkit", description="Точные вычисления для деформаций особенностей")
    _add_global_flags(parser, nested=False)
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    def action(group, name: str, help_text: str) -> argparse.ArgumentParser:
        sub = group.add_parser(name, help=help_text)
        _add_global_flags(sub, nested=True)
        return sub

    singularity = commands.add_parser("singularity", help="анализ особенности").add_subparsers(dest="action", required=True)
    analyze = action(singularity, "analyze", "μ, τ, T¹, тип ADE")
    analyze.add_argument("--vars", required=True)
    analyze.add_argument("--poly", action="append", required=True)

    deform = commands.add_parser("deform", help="деформации").add_subparsers(dest="action", required=True)
    semi = action(deform, "semiuniversal", "полууниверсальное семейство")
    semi.add_argument("--vars", required=True)
    semi.add_argument("--poly", action="append", required=True)
    scan = action(deform, "scan", "особые точки слоя")
    scan.add_argument("--vars", required=True)
    scan.add_argument("--poly", action="append", required=True)
    scan.add_argument("--at", required=True, help="значения параметров через запятую")

    resolve = commands.add_parser("resolve", help="разрешения").add_subparsers(dest="action", required=True)
    an = action(resolve, "an", "одновременное разрешение A_n")
    an.add_argument("--n", type=int, required=True)
    an.add_argument("--sample-fibers", type=int, default=0)
    action(resolve, "node", "малые разрешения узла")
    action(resolve, "flop", "неопределенность флопа")

    quotient = commands.add_parser("quotient", help="факторы по (Z/2)^k").add_subparsers(dest="action", required=True)
    bidouble = action(quotient, "bidouble", "фактор семейства по диагональному действию")
    bidouble.add_argument("--vars", default=",".join(DiagonalAction.standard_action().ring.names))
    bidouble.add_argument("--poly", action="append")
    bidouble.add_argument("--action", dest="signs", help="характеры образующих: '1,1,-1,1;-1,-1,1,1'")
    bidouble.add_argument("--names", help="имена координат фактора")
    bidouble.add_argument("--fixed", help="элемент группы для неподвижного множества: '1,1,-1,1'")

    surface = commands.add_parser("surface", help="поверхности общего типа").add_subparsers(dest="action", required=True)
    invariants = action(surface, "invariants", "многочлен Гильберта и оценка Энриквеса")
    invariants.add_argument("--chi", type=int, required=True)
    invariants.add_argument("--k2", type=int, required=True)
    invariants.add_argument("--h0-theta", type=int, default=0)
    invariants.add_argument("--m", type=int, default=1)
    nodal = action(surface, "nodal-bounds", "оценки числа узлов")
    nodal.add_argument("--d", type=int)
    nodal.add_argument("--d-max", type=int)
    segre = action(surface, "segre", "поверхность Сегре и подсчет узлов")
    segre.add_argument("--d", type=int, required=True)
    catalog = action(surface, "catalog", "взвешенные гиперповерхности X_d ⊂ P(1,1,p,q)")
    catalog.add_argument("--family", type=int, required=True)
    catalog.add_argument("--k", type=int)
    catalog.add_argument("--p", type=int)
    catalog.add_argument("--r", type=int)
    catalog.add_argument("--k-max", type=int)
    double = action(surface, "double-cover", "двойные накрытия")
    double.add_argument("--d1", type=int, required=True)
    double.add_argument("--d2", type=int, required=True)
    isogenous = action(surface, "isogenous", "число Эйлера поверхности, изогенной произведению")
    isogenous.add_argument("--g1", type=int, required=True)
    isogenous.add_argument("--g2", type=int, required=True)
    isogenous.add_argument("--order", type=int, required=True)
    return parser


def _parse_rationals(text: str) -> List[Fraction]:
    values = []
    for item in text.split(","):
        try:
            values.append(Fraction(item.strip()))
        except (ValueError, ZeroDivisionError):
            raise InvalidArgumentError(f"Не рациональное число: {item!r}") from None
    return values


def _parse_signs(text: str) -> Tuple[Tuple[int, ...], ...]:
    try:
        return tuple(tuple(int(s) for s in block.split(",")) for block in text.split(";") if block.strip())
    except ValueError:
        raise InvalidArgumentError(f"Некорректные характеры: {text!r}") from None


class DefkitCLI:
    """Сервисы библиотеки и обработчики подкоманд"""

    def __init__(self, config: Optional[RunConfig] = None, stdin: Optional[TextIO] = None):
        self.config = config or SETTINGS
        self.stdin = stdin or sys.stdin
        self.analyzer = SingularityAnalyzer(self.config)
        self.deformations = DeformationBuilder(self.config, self.analyzer)
        self.resolutions = ResolutionBuilder(self.config, self.deformations)
        self.quotients = BidoubleQuotient(self.config, self.analyzer.ops)
        self.surfaces = SurfaceCalculator(self.config, self.analyzer.ops)
        self.handlers: Dict[Tuple[str, str], Callable] = {
            ("singularity", "analyze"): self.singularity_analyze,
            ("deform", "semiuniversal"): self.deform_semiuniversal,
            ("deform", "scan"): self.deform_scan,
            ("resolve", "an"): self.resolve_an,
            ("resolve", "node"): self.resolve_node,
            ("resolve", "flop"): self.resolve_flop,
            ("quotient", "bidouble"): self.quotient_bidouble,
            ("surface", "invariants"): self.surface_invariants,
            ("surface", "nodal-bounds"): self.surface_nodal_bounds,
            ("surface", "segre"): self.surface_segre,
            ("surface", "catalog"): self.surface_catalog,
            ("surface", "double-cover"): self.surface_double_cover,
            ("surface", "isogenous"): self.surface_isogenous,
        }

    def run(self, args: argparse.Namespace) -> Tuple[object, str]:
        return self.handlers[(args.command, args.action)](args)

    def _polynomials(self, args: argparse.Namespace):
        ring = parse_variables(args.vars)
        sources: List[str] = []
        for item in args.poly:
            if item == "-":
                sources.extend(line.strip() for line in self.stdin.read().splitlines() if line.strip())
            else:
                sources.append(item)
        if not sources:
            raise InvalidArgumentError("Не задано ни одного многочлена")
        return ring, [parse_polynomial(src, ring).parsed for src in sources]

    # ------------------------------------------------------------ singularity

    @staticmethod
    def _report_lines(report: SingularityReport) -> List[str]:
        basis = ", ".join(str(m) for m in report.t1_monomials()) or "—"
        lines = [
            f"   μ = {FormatHelpers.format_colength(report.mu)}, τ = {report.tau}, коранг {report.corank}",
            f"   Базис T¹: {basis}",
        ]
        if report.ade:
            lines.append(f"✅ Тип ADE: {report.ade}")
        if report.dynkin:
            lines.append(
                f"   Диаграмма Дынкина: {report.dynkin.vertices} вершин, "
                f"|W| = {report.dynkin.weyl_order} ({report.dynkin.weyl_name})"
            )
        return lines

    def singularity_analyze(self, args):
        ring, polys = self._polynomials(args)
        if len(polys) == 1:
            report = self.analyzer.analyze(polys[0])
            lines = [f"📐 Особенность {polys[0]} в {ring}"] + self._report_lines(report)
            if report.ade is None and ring.nvars == 3:
                lines.append("⚠️  Не рациональная двойная точка (или не распознана)")
            return report, "\n".join(lines)
        presentation = self.analyzer.t1_complete_intersection(polys)
        lines = [
            f"📐 Полное пересечение ({', '.join(str(p) for p in polys)}) в {ring}",
            f"   τ = {presentation.tau}",
            f"   {presentation.description}",
        ]
        return presentation, "\n".join(lines)

    # ------------------------------------------------------------ deform

    def deform_semiuniversal(self, args):
        _, polys = self._polynomials(args)
        family = self.deformations.semiuniversal_family(polys)
        return family, "🔧 Полууниверсальная деформация\n" + family.describe()

    def deform_scan(self, args):
        _, polys = self._polynomials(args)
        family = self.deformations.semiuniversal_family(polys)
        values = _parse_rationals(args.at)
        scan = self.deformations.fiber_singularity_scan(family, values)
        lines = [f"🔍 Слой при ({', '.join(map(FormatHelpers.format_rational, values))})"]
        if not scan:
            lines.append("✅ Слой гладкий: особых точек нет")
        for point in scan:
            if point.is_rational:
                coords = ", ".join(map(FormatHelpers.format_rational, point.coordinates))
                label = point.report.ade if point.report and point.report.ade else f"τ = {point.tau}"
                lines.append(f"   • ({coords}): {label}")
            else:
                lines.append(
                    f"   • кластер иррациональных точек: степень поля {point.residue_degree}, длина {point.length}"
                )
        lines.append(f"📊 Суммарное τ слоя: {self.deformations.total_tau(scan)}")
        return {'family': family, 'points': scan}, "\n".join(lines)

    # ------------------------------------------------------------ resolve

    @staticmethod
    def _variety_lines(variety: ChartedVariety) -> List[str]:
        lines = []
        for chart in variety.charts:
            mark = "✅" if chart.certificate and chart.certificate.is_smooth else "❌"
            verdict = chart.certificate.verdict.value if chart.certificate else "—"
            lines.append(f"{mark} Карта {chart.name}: {chart.ideal}: {verdict}")
        lines.append(f"   Склейка: {variety.gluing_note}")
        return lines

    def resolve_an(self, args):
        variety = self.resolutions.an_simultaneous_resolution(args.n)
        lines = [f"🧩 Одновременное разрешение A_{args.n}"] + self._variety_lines(variety)
        payload = {'variety': variety}
        if args.sample_fibers > 0:
            samples = self.resolutions.sample_fibers(variety, args.sample_fibers)
            smooth = sum(1 for _, _, cert in samples if cert.is_smooth)
            lines.append(f"📊 Гладких слоев: {smooth} из {len(samples)}")
            payload['fiber_samples'] = [
                {'chart': name, 'point': list(point), 'verdict': cert.verdict.value} for name, point, cert in samples
            ]
        return payload, "\n".join(lines)

    def resolve_node(self, args):
        first, second = self.resolutions.node_small_resolutions()
        lines = ["🧩 Малое разрешение S"] + self._variety_lines(first)
        lines += ["🧩 Малое разрешение S'"] + self._variety_lines(second)
        return {'S': first, 'S_prime': second}, "\n".join(lines)

    def resolve_flop(self, args):
        locus = self.resolutions.flop_indeterminacy()
        dim = self.resolutions.engine.dimension(locus)
        biregular = self.resolutions.flop_is_biregular_off_center()
        lines = [
            f"🔀 Множество неопределенности флопа в координатах (u, tau, xi): {locus}",
            f"   Размерность: {dim}",
            ("✅" if biregular else "❌") + " Вне центрального слоя tau = 0 отображение бирегулярно",
        ]
        return {'indeterminacy': locus, 'dimension': dim, 'biregular_off_center': biregular}, "\n".join(lines)

    # ------------------------------------------------------------ quotient

    def quotient_bidouble(self, args):
        if args.signs:
            ring = parse_variables(args.vars)
            act = DiagonalAction(ring, _parse_signs(args.signs))
            names = parse_variables(args.names).names if args.names else None
        else:
            act = DiagonalAction.standard_action()
            ring = act.ring
            names = parse_variables(args.names).names if args.names else STANDARD_TARGET
        sources = args.poly or [DEFAULT_BIDOUBLE_EQUATION]
        total = Ideal(ring, tuple(parse_polynomial(src, ring).parsed for src in sources))

        presentation = self.quotients.invariant_ring(act, names)
        result = self.quotients.quotient_family(total, act, presentation)
        lines = ["🔢 Кольцо инвариантов:"]
        lines += [f"   {name} = {monomial}" for name, monomial in presentation.generators()]
        lines.append(f"   Соотношения: {presentation.relations}")
        lines.append(f"📐 Фактор: {result.ideal}")
        lines.append(("✅" if result.certified else "❌") + " Совпадает с идеалом исключения")
        payload = {'presentation': presentation, 'quotient': result}
        if args.fixed:
            element = _parse_signs(args.fixed)[0]
            fixed = self.quotients.fixed_locus(act, element, total)
            image = self.quotients.fixed_locus_image(act, element, total, presentation)
            lines.append(f"📍 Неподвижное множество: {fixed}; образ: {image}")
            payload['fixed_locus'] = fixed
            payload['fixed_locus_image'] = image
        return payload, "\n".join(lines)

    # ------------------------------------------------------------ surface

    def surface_invariants(self, args):
        inv = SurfaceInvariants(chi=args.chi, k2=args.k2, h0_theta=args.h0_theta)
        hilbert = self.surfaces.hilbert_polynomial(inv, args.m)
        enriques = self.surfaces.enriques_lower_bound(inv)
        lines = [
            f"📊 χ = {inv.chi}, K² = {inv.k2}, h⁰(Θ) = {inv.h0_theta}",
            f"   P({args.m}) = h⁰({5 * args.m}K) = {hilbert}",
            f"   P₅ = χ + 10K² = {self.surfaces.p5(inv)}",
            f"   Оценка Энриквеса: {FormatHelpers.format_bound(enriques)}",
        ]
        payload = {
            'invariants': inv,
            'm': args.m,
            'hilbert_polynomial': hilbert,
            'p5': self.surfaces.p5(inv),
            'enriques_lower_bound': enriques,
            'enriques_vacuous': enriques < 0,
        }
        return payload, "\n".join(lines)

    def surface_nodal_bounds(self, args):
        if args.d_max is not None:
            table = self.surfaces.nodal_table(args.d_max)
            text = FormatHelpers.format_frame(table)
            return {'table': table.to_dicts()}, "📊 Оценки числа узлов\n" + text
        if args.d is None:
            raise InvalidArgumentError("Нужно указать --d или --d-max")
        bounds = self.surfaces.nodal_bounds(args.d)
        rows = [
            ("Севери ν(d)", bounds.severi),
            ("Сегре d²(d−1)/4", bounds.segre if bounds.segre is not None else "—"),
            ("Чмутов (5/12)d³", FormatHelpers.format_rational(bounds.chmutov_low)),
            ("Мияока (4/9)d³", FormatHelpers.format_rational(bounds.miyaoka_high)),
            ("Рекорд μ(d)", f"{bounds.record.mu_known} ({bounds.record.witness_name})" if bounds.record else "—"),
        ]
        text = f"📊 Узловые поверхности степени {bounds.d}\n" + FormatHelpers.format_table(rows, ["оценка", "значение"])
        if bounds.severi_caveat:
            text += "\n⚠️  Оценка Севери сформулирована для d ≥ 4"
        text += "\n⚠️  Асимптотические коэффициенты приведены без уточнений для конкретного d"
        return bounds, text

    def surface_segre(self, args):
        surface = self.surfaces.build_segre_surface(args.d)
        count = self.surfaces.count_nodes(surface)
        ok = count.count == surface.expected_nodes and count.all_a1
        lines = [
            f"🧮 Поверхность Сегре степени {surface.d} (зерно {surface.seed}, попытка {surface.attempts})",
            f"   {surface.equation}",
            f"   Узлов: {count.count if count.count is not None else '—'} (ожидалось {surface.expected_nodes}), "
            f"длина схемы {count.raw_colength}, все A1: {count.all_a1}",
            ("✅" if ok else "⚠️ ") + " Проверка числа узлов",
        ]
        return {'surface': surface, 'nodes': count}, "\n".join(lines)

    def surface_catalog(self, args):
        if args.k_max is not None:
            entries = list(self.surfaces.enumerate_catalog(args.family, args.k_max))
        else:
            if args.k is None:
                raise InvalidArgumentError("Нужно указать --k или --k-max")
            entries = self.surfaces.weighted_catalog(CatalogQuery(args.family, args.k, args.p, args.r))
        table = self.surfaces.catalog_table(entries)
        return entries, "📚 Взвешенные гиперповерхности\n" + FormatHelpers.format_frame(table)

    def surface_double_cover(self, args):
        result = self.surfaces.double_cover_invariants(args.d1, args.d2)
        inv = result.invariants
        text = (
            f"📊 Двойное накрытие ({args.d1}, {args.d2}): p_g = {inv.pg}, q = {inv.q}, "
            f"χ = {inv.chi}, K² = {inv.k2}, dim = {result.moduli_dim}"
        )
        return result, text

    def surface_isogenous(self, args):
        euler = self.surfaces.isogenous_euler(args.g1, args.g2, args.order)
        return {'euler_number': euler}, f"📊 e(S) = {euler}"


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    config = RunConfig.from_env()
    return config.with_overrides(
        OUTPUT_FORMAT=args.format,
        SEED=args.seed,
        MAX_BASIS_ELEMENTS=args.max_basis,
        MAX_SATURATION_ITERATIONS=args.max_saturation,
        JET_DEGREE_CAP=args.jet_cap,
        CHART_CAP=args.chart_cap,
        LOG_LEVEL=args.log_level,
    )


def dispatch(argv: Optional[Sequence[str]] = None, stdin: Optional[TextIO] = None, stdout: Optional[TextIO] = None) -> int:
    """Точка входа CLI; коды выхода: 0 при успехе, 1 при ошибке вычисления, 2 при ошибке аргументов"""
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except CliUsageError as exc:
        print(f"❌ {exc}\n{parser.format_usage()}", file=sys.stderr)
        return 2
    except SystemExit as exc:
        return int(exc.code or 0)

    command = f"{args.command} {args.action}"
    config = SETTINGS
    output_format = args.format or "text"
    result, text, errors = None, "", []
    try:
        config = _config_from_args(args)
        output_format = config.OUTPUT_FORMAT
        SystemHelpers.setup_logging(config.LOG_LEVEL, config.LOG_FILE)
        result, text = DefkitCLI(config, stdin).run(args)
    except DefkitError as exc:
        logger.error(f"{command}: {exc.message}")
        errors.append(exc.to_dict())
    except Exception as exc:
        logger.exception(f"{command}: внутренняя ошибка")
        errors.append({'type': 'InternalError', 'code': 'internal', 'message': str(exc), 'details': {}})

    if output_format == "json":
        envelope = {'command': command, 'config': config.as_dict(), 'result': to_json(result), 'errors': errors}
        print(dumps(envelope), file=stdout)
    elif errors:
        for error in errors:
            print(f"❌ {error['type']}: {error['message']}", file=stdout)
    else:
        print(text, file=stdout)
    return 1 if errors else 0


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
