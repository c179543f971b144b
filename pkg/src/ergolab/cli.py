"""
CLI интерфейс для ergolab.
"""
import argparse
import json
import os
import sys
from pathlib import Path
from typing import Optional

from ergolab import __version__
from ergolab.app import ErgolabApp
from ergolab.core.errors import HypothesisViolationError, InvalidArgumentError
from ergolab.services.fs import ConfigParseError

SEED_ENV = "ERGOLAB_SEED"

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_PARSE = 2
EXIT_HYPOTHESIS = 3


def _env_seed() -> Optional[int]:
    """
    Зерно из переменной окружения ERGOLAB_SEED.

    :raises InvalidArgumentError: Если значение не является целым >= 0.
    """
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw.strip() == "":
        return None
    try:
        seed = int(raw)
    except ValueError:
        raise InvalidArgumentError(f"{SEED_ENV} должна быть целым числом, получено '{raw}'")
    if seed < 0:
        raise InvalidArgumentError(f"{SEED_ENV} должна быть неотрицательной, получено {seed}")
    return seed


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ergolab",
        description="Лаборатория взвешенных подпоследовательных эргодических средних "
        "в конечномерных следовых алгебрах",
    )
    parser.add_argument(
        "--verbose",
        "-v",
        action="store_true",
        help="Включить подробное логирование",
    )
    parser.add_argument(
        "--version",
        action="version",
        version=f"ergolab {__version__}",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="Выполнить один сценарий")
    run.add_argument("scenario", type=Path, help="Путь к файлу сценария (.json, .yml, .yaml)")
    run.add_argument(
        "--out",
        type=Path,
        default=None,
        help="Директория результатов (по умолчанию: ./results/<id сценария>)",
    )

    suite = commands.add_parser("suite", help="Выполнить все сценарии директории")
    suite.add_argument("directory", type=Path, help="Директория со сценариями")
    suite.add_argument("--jobs", type=int, default=1, help="Число параллельных сценариев (по умолчанию: 1)")
    suite.add_argument(
        "--out",
        type=Path,
        default=None,
        help="Корень результатов (по умолчанию: ./results)",
    )

    norms = commands.add_parser("norms", help="Таблица норм сериализованного элемента")
    norms.add_argument("element", type=Path, help="JSON-файл элемента")
    norms.add_argument("--phi", default="p:2", help="Функция Орлича: p:<p> или expm1 (по умолчанию: p:2)")
    return parser


def _execute(app: ErgolabApp, args: argparse.Namespace) -> int:
    if args.command == "run":
        if not args.scenario.is_file():
            raise ConfigParseError(f"Файл сценария не найден: {args.scenario}")
        outcome = app.run(args.scenario, out_dir=args.out, seed=_env_seed())
        print(f"Результаты: {outcome.output_dir}")
        for name, ok in sorted(outcome.result.checks.items()):
            print(f"  {name}: {'pass' if ok else 'FAIL'}")
        return EXIT_OK

    if args.command == "suite":
        if args.jobs < 1:
            raise InvalidArgumentError(f"--jobs должно быть >= 1, получено {args.jobs}")
        summary = app.suite(args.directory, out_dir=args.out, jobs=args.jobs, seed=_env_seed())
        for row in summary.rows:
            suffix = f" ({row.message})" if row.message else ""
            print(f"{row.status:5} {row.scenario}{suffix}")
        print(f"Сводка: {summary.summary_path}")
        return EXIT_OK if summary.all_passed else EXIT_FAILURE

    table = app.norms(args.element, args.phi)
    print(json.dumps(table, indent=2, sort_keys=True, ensure_ascii=False))
    return EXIT_OK


def main(argv: Optional[list] = None) -> int:
    """
    Главная точка входа для CLI ergolab.

    :return: Код возврата: 0 при успехе, 1 при ошибке выполнения,
        2 при ошибке разбора или валидации, 3 при нарушении гипотезы теоремы.
    """
    parser = _build_parser()
    args = parser.parse_args(argv)

    try:
        app = ErgolabApp(verbose=args.verbose)
        return _execute(app, args)
    except HypothesisViolationError as e:
        print(f"Нарушена гипотеза: {e.hypothesis}", file=sys.stderr)
        print(f"Ошибка: {e}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except (ConfigParseError, InvalidArgumentError) as e:
        print(f"Ошибка: {e}", file=sys.stderr)
        return EXIT_PARSE
    except Exception as e:
        print(f"Ошибка: {e}", file=sys.stderr)
        if args.verbose:
            import traceback
            traceback.print_exc()
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
