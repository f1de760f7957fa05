"""
zscomp 命令行入口

退出码: 0 成功；1 运行/数据错误；2 配置/参数错误
"""
import functools
import logging
import sys
from typing import Any, Callable, Dict, List, Optional

import click
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from .application.dto.run_config import RunConfig, configuration_error
from .application.services.classification_service import ClassificationAppService
from .application.services.evaluation_service import EvaluationAppService
from .application.services.experiment_context import ExperimentContext
from .application.services.fixture_service import FixtureAppService, FixtureSpec
from .application.services.oracle_check_service import OracleCheckService
from .application.services.selection_service import SelectionAppService
from .application.settings import ZscompSettings
from .domain.exceptions import ConfigurationError, DomainError
from .domain.inference.scores import Method

console = Console()
err_console = Console(stderr=True)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_CONFIG = 2

EMBEDDING_FORMATS = click.Choice(["word2vec_text", "binary_table"])
METHODS = click.Choice([m.value for m in Method])

# (选项, 字段名, click参数)
CONFIG_OPTIONS = [
    ("--object-embeddings", "object_embeddings", {}),
    ("--scene-embeddings", "scene_embeddings", {}),
    ("--action-embeddings", "action_embeddings", {}),
    ("--object-embedding-format", "object_embedding_format", {"type": EMBEDDING_FORMATS}),
    ("--scene-embedding-format", "scene_embedding_format", {"type": EMBEDDING_FORMATS}),
    ("--action-embedding-format", "action_embedding_format", {"type": EMBEDDING_FORMATS}),
    ("--object-probabilities", "object_probabilities", {}),
    ("--scene-probabilities", "scene_probabilities", {}),
    ("--probability-format", "probability_format", {"type": click.Choice(["csv", "zspm_binary"])}),
    ("--frame-level/--no-frame-level", "frame_level", {}),
    ("--object-vocab", "object_vocab", {}),
    ("--scene-vocab", "scene_vocab", {}),
    ("--action-vocab", "action_vocab", {}),
    ("--ground-truth", "ground_truth", {}),
    ("--cache-path", "cache_path", {}),
    ("--output-dir", "output_dir", {}),
    ("--method", "method", {"type": METHODS}),
    ("--weight-mode", "weight_mode", {"type": click.Choice(["none", "in_scoring", "in_selection"])}),
    ("--selection-mode", "selection_mode", {"type": click.Choice(["mmr", "plain"])}),
    ("--k-object", "k_object", {"type": int}),
    ("--k-scene", "k_scene", {"type": int}),
    ("--k-concatenation", "k_concatenation", {"type": int}),
    ("--k-composition", "k_composition", {"type": int}),
    ("--lambda", "mmr_lambda", {"type": float}),
    ("--pool-size", "pool_size", {"help": "正整数或 full"}),
    ("--seed", "seed", {"type": int}),
    ("--renormalize/--no-renormalize", "renormalize", {}),
    ("--normalize-before-sum/--no-normalize-before-sum", "normalize_before_sum", {}),
    ("--exclude-self-pairs/--include-self-pairs", "exclude_self_pairs", {}),
    ("--clip-similarities/--no-clip-similarities", "clip_similarities", {}),
    ("--oov-policy", "oov_policy", {"type": click.Choice(["fail", "zero"])}),
]

EVALUATION_OPTIONS = [
    ("--subset-size", "subset_size", {"type": int}),
    ("--num-trials", "num_trials", {"type": int}),
    ("--compare-method", "compare_method", {"type": METHODS}),
]


def _add_options(options: List[tuple]) -> Callable:
    def decorator(func: Callable) -> Callable:
        for flags, name, kwargs in reversed(options):
            func = click.option(flags, name, default=None, **kwargs)(func)
        return func
    return decorator


def config_options(func: Callable) -> Callable:
    """--config 以及所有可覆盖配置项"""
    func = _add_options(CONFIG_OPTIONS)(func)
    return click.option("--config", "config_path", default=None,
                        type=click.Path(dir_okay=False),
                        help="JSON配置文件")(func)


def _parse_list(value: Optional[str], cast: Callable[[str], Any]) -> Optional[List[Any]]:
    if value is None:
        return None
    try:
        return [cast(x.strip()) for x in value.split(",") if x.strip()]
    except ValueError as e:
        raise click.BadParameter(f"无法解析列表 '{value}': {e}") from e


def build_config(config_path: Optional[str], overrides: Dict[str, Any]) -> RunConfig:
    """配置文件 + 命令行覆盖"""
    base = RunConfig.from_json_file(config_path) if config_path else RunConfig.create({})
    pool_size = overrides.get("pool_size")
    if isinstance(pool_size, str) and pool_size.strip().lstrip("-").isdigit():
        overrides["pool_size"] = int(pool_size)
    return base.merged(overrides)


def handle_errors(func: Callable) -> Callable:
    """把领域异常映射为退出码"""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except ValidationError as e:
            err_console.print(f"[red]配置错误:[/red] {configuration_error(e)}")
            raise click.exceptions.Exit(EXIT_CONFIG)
        except ConfigurationError as e:
            err_console.print(f"[red]配置错误:[/red] {e}")
            raise click.exceptions.Exit(EXIT_CONFIG)
        except (DomainError, OSError) as e:
            err_console.print(f"[red]运行错误:[/red] {type(e).__name__}: {e}")
            raise click.exceptions.Exit(EXIT_RUNTIME)

    return wrapper


def setup_logging(level: str) -> None:
    logging.basicConfig(
        level=level.upper(),
        format="%(message)s",
        handlers=[RichHandler(console=err_console, show_path=False, rich_tracebacks=False)],
        force=True,
    )


def _context(ctx: click.Context, config: RunConfig) -> ExperimentContext:
    settings: ZscompSettings = ctx.obj["settings"]
    requested = ctx.obj["threads"]
    if requested is None and config.threads:
        requested = config.threads
    return ExperimentContext(config, threads=settings.resolve_threads(requested))


def _overrides(kwargs: Dict[str, Any], options: List[tuple]) -> Dict[str, Any]:
    return {name: kwargs.get(name) for _, name, _ in options}


@click.group()
@click.option("--log-level", default=None,
              type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
              help="日志级别（默认取 ZSCOMP_LOG_LEVEL）")
@click.option("--threads", type=click.IntRange(min=0), default=None,
              help="线程数，0为自动（默认取 ZSCOMP_THREADS）")
@click.version_option(package_name="zscomp")
@click.pass_context
def cli(ctx: click.Context, log_level: Optional[str], threads: Optional[int]):
    """基于物体-场景组合的零样本动作分类"""
    settings = ZscompSettings()
    setup_logging(log_level or settings.log_level)
    ctx.ensure_object(dict)
    ctx.obj["settings"] = settings
    ctx.obj["threads"] = threads


@cli.command("select")
@config_options
@click.pass_context
@handle_errors
def select_cmd(ctx: click.Context, config_path: Optional[str], **kwargs):
    """为每个动作选择top-k组合并导出CSV"""
    config = build_config(config_path, _overrides(kwargs, CONFIG_OPTIONS))
    config.require_for("select")
    manifest = SelectionAppService(_context(ctx, config)).run()
    console.print(f"已导出 {manifest['num_actions']} 个动作的组合集合到 {config.output_dir}")


@cli.command("classify")
@config_options
@click.pass_context
@handle_errors
def classify_cmd(ctx: click.Context, config_path: Optional[str], **kwargs):
    """对视频打分并预测动作"""
    config = build_config(config_path, _overrides(kwargs, CONFIG_OPTIONS))
    config.require_for("classify")
    report = ClassificationAppService(_context(ctx, config)).run()
    console.print(f"已对 {report['num_videos']} 个视频完成分类 (方法={report['method']})")


@cli.command("evaluate")
@config_options
@_add_options(EVALUATION_OPTIONS)
@click.pass_context
@handle_errors
def evaluate_cmd(ctx: click.Context, config_path: Optional[str], **kwargs):
    """计算准确率、逐动作对比与随机子集试验"""
    config = build_config(config_path, _overrides(kwargs, CONFIG_OPTIONS + EVALUATION_OPTIONS))
    config.require_for("evaluate")
    config.require_for("evaluate", Method(config.compare_method))
    report = EvaluationAppService(_context(ctx, config)).evaluate()

    table = Table(title="准确率")
    table.add_column("方法")
    table.add_column("准确率", justify="right")
    for method, acc in report['accuracy'].items():
        table.add_row(method, f"{acc:.4f}")
    console.print(table)
    for method, trials in report.get('trials', {}).items():
        console.print(f"{method}: {trials['mean']:.4f} ± {trials['std']:.4f} "
                      f"({trials['num_trials']} 次试验, 每次 {trials['subset_size']} 个动作)")


@cli.command("ablate")
@config_options
@click.option("--subset-sizes", default=None, help="逗号分隔的子集大小，默认使用全部动作")
@click.option("--num-trials", "num_trials", type=int, default=None)
@click.pass_context
@handle_errors
def ablate_cmd(ctx: click.Context, config_path: Optional[str], subset_sizes: Optional[str],
               num_trials: Optional[int], **kwargs):
    """运行各打分方法的对比实验，输出汇总表"""
    overrides = _overrides(kwargs, CONFIG_OPTIONS)
    overrides["ablation_subset_sizes"] = _parse_list(subset_sizes, int)
    overrides["num_trials"] = num_trials
    config = build_config(config_path, overrides)
    config.require_for("ablate")
    report = EvaluationAppService(_context(ctx, config)).ablate()

    table = Table(title="消融实验")
    for column in ("方法", "子集大小", "均值", "标准差"):
        table.add_column(column)
    for row in report['results']:
        table.add_row(row['method'], str(row['subset_size']),
                      f"{row['mean']:.4f}", f"{row['std']:.4f}")
    console.print(table)


@cli.command("sweep")
@config_options
@click.option("--lambdas", default=None, help="逗号分隔的λ值")
@click.option("--ks", default=None, help="逗号分隔的k值")
@click.pass_context
@handle_errors
def sweep_cmd(ctx: click.Context, config_path: Optional[str], lambdas: Optional[str],
              ks: Optional[str], **kwargs):
    """在 λ × k 网格上评估组合方法"""
    overrides = _overrides(kwargs, CONFIG_OPTIONS)
    overrides["sweep_lambdas"] = _parse_list(lambdas, float)
    overrides["sweep_ks"] = _parse_list(ks, int)
    config = build_config(config_path, overrides)
    config.require_for("sweep", Method.COMPOSITIONS)
    report = EvaluationAppService(_context(ctx, config)).sweep()
    for point in report['points']:
        console.print(f"λ={point['mmr_lambda']:.2f} k={point['k']}: {point['accuracy']:.4f}")


@cli.command("fixtures")
@click.option("--output-dir", required=True, type=click.Path(file_okay=False))
@click.option("--objects", "num_objects", type=int, default=20, show_default=True)
@click.option("--scenes", "num_scenes", type=int, default=15, show_default=True)
@click.option("--actions", "num_actions", type=int, default=10, show_default=True)
@click.option("--videos", "num_videos", type=int, default=50, show_default=True)
@click.option("--dimension", type=int, default=16, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--noise", type=float, default=0.3, show_default=True)
@click.option("--max-attempts", type=int, default=20, show_default=True)
@click.pass_context
@handle_errors
def fixtures_cmd(ctx: click.Context, output_dir: str, **kwargs):
    """生成带预置结构的合成实例"""
    spec = FixtureSpec(**kwargs)
    settings: ZscompSettings = ctx.obj["settings"]
    service = FixtureAppService(spec, output_dir, threads=settings.resolve_threads(ctx.obj["threads"]))
    summary = service.generate()
    console.print(f"合成实例已写出: {summary['config']}")
    for method, acc in sorted(summary['accuracies'].items()):
        console.print(f"  {method}: {acc:.4f}")


@cli.command("oracle-check")
@config_options
@click.pass_context
@handle_errors
def oracle_check_cmd(ctx: click.Context, config_path: Optional[str], **kwargs):
    """与朴素参考实现逐项比较"""
    config = build_config(config_path, _overrides(kwargs, CONFIG_OPTIONS))
    config.require_for("oracle-check")
    report = OracleCheckService(_context(ctx, config)).run()
    if not report['passed']:
        for line in report['mismatches'][:20]:
            err_console.print(f"[red]✗[/red] {line}")
        raise click.exceptions.Exit(EXIT_RUNTIME)
    console.print(f"[green]✓[/green] 与参考实现一致 (最大分数差 {report['max_abs_score_diff']:.3g})")


def main(argv: Optional[List[str]] = None) -> int:
    """控制台入口"""
    try:
        result = cli.main(args=argv, prog_name="zscomp", standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return e.exit_code
    except click.exceptions.Abort:
        err_console.print("已中止")
        return EXIT_RUNTIME
    return result if isinstance(result, int) else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
