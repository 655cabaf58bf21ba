"""
Командная строка Parity Complement

Подкоманды: complement, member, empty, enumerate, hardword, check, tightness.
Результаты печатаются в stdout, логи идут в stderr и файл.
Коды выхода: 0 успех, 1 проверка не прошла, 2 ошибка использования или формата,
3 превышен лимит.
"""
import argparse
import json
import os
import sys
from typing import List, Optional

from loguru import logger
from pydantic import ValidationError

from parity_complement import __version__
from parity_complement.config import settings
from parity_complement.models.automata import (
    AutomatonError, BuchiAutomaton, LassoWord, ParityAutomaton,
    buchi_as_parity, lift_priorities, normalize,
)
from parity_complement.models.fnht import FNHTError
from parity_complement.models.schemas import FNHTFile, MFTFile, WordFile
from parity_complement.services.complement_service import build_complement, phase_counts
from parity_complement.services.fnht_service import CapExceededError, fnht_service
from parity_complement.services.hardness_service import (
    HardnessError, full_parity_automaton, hard_word,
)
from parity_complement.services.oracle_service import (
    OracleError, VerificationError, buchi_emptiness, buchi_lasso_member,
    parity_lasso_member, parity_to_buchi,
)
from parity_complement.services.verification_service import (
    render_text, reports_frame, tightness_table, verification_service,
)
from parity_complement.utils.files import (
    FileFormatError, load_automaton, load_model, save_automaton, save_model,
)
from parity_complement.utils.helpers import full_mask


EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_CAP = 3


def setup_logging(level: Optional[str] = None) -> None:
    """Настройка логирования: stderr и ротируемый файл"""
    level = (level or settings.log_level).upper()
    logger.remove()
    logger.add(sys.stderr, level=level, format="{time:HH:mm:ss} | {level} | {message}")
    if settings.log_file:
        directory = os.path.dirname(settings.log_file)
        if directory:
            os.makedirs(directory, exist_ok=True)
        logger.add(
            settings.log_file,
            rotation="10 MB",
            retention="7 days",
            level=level,
            format="{time:YYYY-MM-DD HH:mm:ss} | {level} | {module}:{function}:{line} | {message}"
        )


def _split_letters(text: Optional[str]) -> List[str]:
    if not text:
        return []
    return [letter.strip() for letter in text.split(",") if letter.strip()]


def _as_parity(automaton) -> ParityAutomaton:
    if isinstance(automaton, BuchiAutomaton):
        return buchi_as_parity(automaton)
    return automaton


def _prepared(automaton) -> ParityAutomaton:
    """Нормализует и при необходимости поднимает приоритеты до max Π ≥ 2"""
    return lift_priorities(normalize(_as_parity(automaton)))


def _priorities_up_to(max_priority: int) -> List[int]:
    return list(range(1, max_priority + 1))


# ==============================================
# ПОДКОМАНДЫ
# ==============================================

def cmd_complement(args) -> int:
    p = _prepared(load_automaton(args.input))
    complement = build_complement(p, args.cap)
    save_automaton(args.output, complement)
    phase1, phase2 = phase_counts(complement)
    print(f"phase1: {phase1}")
    print(f"phase2: {phase2}")
    print(f"transitions: {len(complement.transitions)}")
    return EXIT_OK


def cmd_member(args) -> int:
    automaton = load_automaton(args.input)
    if args.word:
        word = load_model(args.word, WordFile).to_word()
    else:
        period = _split_letters(args.period)
        if not period:
            raise AutomatonError("--period or --word is required")
        word = LassoWord(tuple(_split_letters(args.prefix)), tuple(period))
    if isinstance(automaton, ParityAutomaton):
        member = parity_lasso_member(automaton, word)
    else:
        member = buchi_lasso_member(automaton, word)
    print("true" if member else "false")
    return EXIT_OK


def cmd_empty(args) -> int:
    automaton = load_automaton(args.input)
    if isinstance(automaton, ParityAutomaton):
        automaton = parity_to_buchi(automaton)
    witness = buchi_emptiness(automaton)
    if witness.empty:
        print("empty")
    else:
        print(json.dumps({
            "prefix": list(witness.lasso.prefix),
            "period": list(witness.lasso.period),
            "cycle": list(witness.cycle),
        }, ensure_ascii=False))
    return EXIT_OK


def cmd_enumerate(args) -> int:
    universe = full_mask(args.states)
    names = [f"q{i}" for i in range(args.states)]
    if args.mfts:
        items = fnht_service.enumerate_mfts(universe, args.max_priority, args.full_only, args.cap)
    else:
        items = fnht_service.enumerate_fnhts(universe, args.max_priority, args.full_only, args.cap)
    if args.count_only:
        print(len(items))
        return EXIT_OK
    for item in items:
        record = MFTFile.from_mft(item, names) if args.mfts else FNHTFile.from_fnht(item, names)
        print(record.model_dump_json())
    return EXIT_OK


def cmd_hardword(args) -> int:
    priorities = _priorities_up_to(args.max_priority)
    registry = full_parity_automaton(args.states, priorities)
    trees = fnht_service.enumerate_fnhts(full_mask(args.states), args.max_priority, full_only=True, cap=args.cap)
    if not 0 <= args.index < len(trees):
        raise HardnessError(f"index {args.index} outside 0..{len(trees) - 1}")
    word, beta, gamma = hard_word(trees[args.index], args.h, registry)
    word_file = WordFile(
        letters=registry.letter_files(),
        prefix=list(word.prefix),
        period=list(word.period),
    )
    if args.automaton_out:
        save_automaton(args.automaton_out, registry.automaton())
    if args.word_out:
        save_model(args.word_out, word_file)
    print(json.dumps({
        "beta": beta,
        "gamma": gamma,
        "word": word_file.model_dump(),
    }, ensure_ascii=False, indent=2))
    return EXIT_OK


def cmd_check(args) -> int:
    p = _prepared(load_automaton(args.input))
    report = verification_service.complement_correctness_check(p, args.prefix_bound, args.period_bound)
    if args.json:
        print(report.model_dump_json(indent=2))
    else:
        print(render_text(reports_frame([report])))
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_tightness(args) -> int:
    report = verification_service.tightness_report(args.states, args.max_priority, args.cap)
    if args.json:
        print(report.model_dump_json(indent=2))
    else:
        print(render_text(tightness_table([report])))
    return EXIT_OK if report.passed else EXIT_FAILED


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="parity-complement",
        description="Complementation of transition-based parity automata into Büchi automata",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=None, help="override LOG_LEVEL")
    commands = parser.add_subparsers(dest="command", required=True)

    complement = commands.add_parser("complement", help="build the complement Büchi automaton")
    complement.add_argument("input")
    complement.add_argument("-o", "--output", required=True)
    complement.add_argument("--cap", type=_positive, default=None)
    complement.set_defaults(handler=cmd_complement)

    member = commands.add_parser("member", help="lasso membership")
    member.add_argument("input")
    member.add_argument("--prefix", default="")
    member.add_argument("--period", default="")
    member.add_argument("--word", default=None, help="word file instead of --prefix/--period")
    member.set_defaults(handler=cmd_member)

    empty = commands.add_parser("empty", help="language emptiness with witness")
    empty.add_argument("input")
    empty.set_defaults(handler=cmd_empty)

    enumerate_ = commands.add_parser("enumerate", help="enumerate FNHTs or MFTs")
    enumerate_.add_argument("--states", type=_positive, required=True)
    enumerate_.add_argument("--max-priority", type=int, required=True)
    enumerate_.add_argument("--full-only", action="store_true")
    enumerate_.add_argument("--mfts", action="store_true")
    enumerate_.add_argument("--count-only", action="store_true")
    enumerate_.add_argument("--cap", type=_positive, default=None)
    enumerate_.set_defaults(handler=cmd_enumerate)

    hardword = commands.add_parser("hardword", help="hard word of a full FNHT")
    hardword.add_argument("--states", type=_positive, required=True)
    hardword.add_argument("--max-priority", type=int, required=True)
    hardword.add_argument("--index", type=int, required=True)
    hardword.add_argument("--h", type=int, default=None)
    hardword.add_argument("--cap", type=_positive, default=None)
    hardword.add_argument("--automaton-out", default=None)
    hardword.add_argument("--word-out", default=None)
    hardword.set_defaults(handler=cmd_hardword)

    check = commands.add_parser("check", help="complement correctness report")
    check.add_argument("input")
    check.add_argument("--prefix-bound", type=int, default=None)
    check.add_argument("--period-bound", type=_positive, default=None)
    check.add_argument("--json", action="store_true")
    check.set_defaults(handler=cmd_check)

    tightness = commands.add_parser("tightness", help="state-count tightness report")
    tightness.add_argument("--states", type=_positive, required=True)
    tightness.add_argument("--max-priority", type=int, required=True)
    tightness.add_argument("--cap", type=_positive, default=None)
    tightness.add_argument("--json", action="store_true")
    tightness.set_defaults(handler=cmd_tightness)

    return parser


def run_cli(argv: Optional[List[str]] = None) -> int:
    """
    Разбирает аргументы и выполняет подкоманду

    Args:
        argv: Аргументы без имени программы (None - sys.argv)

    Returns:
        Код выхода
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    setup_logging(args.log_level)

    try:
        return args.handler(args)
    except CapExceededError as e:
        logger.error(f"Превышен лимит: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CAP
    except VerificationError as e:
        logger.error(f"Проверка не пройдена: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILED
    except (ValidationError, AutomatonError, FileFormatError, FNHTError,
            HardnessError, OracleError) as e:
        logger.error(f"Ошибка входных данных: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
