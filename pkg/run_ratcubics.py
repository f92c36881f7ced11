from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from ratcubics import *
from ratcubics import converters

SCHEMA_VERSION = 1
# options whose comma-separated value may start with a minus sign
LIST_OPTIONS = ("--coeffs", "--sigma")


def attach_list_values(argv: list[str]) -> list[str]:
    """Rewrite ``--coeffs -3,0,...`` as ``--coeffs=-3,0,...``; argparse reads a detached ``-3,0,...`` as an option."""
    attached = []
    args = iter(argv)
    for arg in args:
        value = next(args, None) if arg in LIST_OPTIONS else None
        attached.append(arg if value is None else f"{arg}={value}")
    return attached


def apply_overrides(config: Config, overrides: list[str]):
    """Apply ``section.key=value`` strings from the command line on top of the config file."""
    for override in overrides:
        option, separator, text = override.partition("=")
        option = option.strip()
        if not separator or "." not in option:
            raise ValueError(f"Config overrides look like section.key=value, e.g. forest.seed=43; got {override!r}.")
        try:
            config.set_option(option, text.strip())
        except KeyError:
            raise ValueError(f"Unknown config option {option!r}.") from None


def load_config(path: str, overrides: list[str]) -> Config:
    if os.path.exists(path):
        config = Config.from_filepath(path)
    elif path == "config.ini":
        config = Config.default()
    else:
        raise ValueError(f"Config file {path!r} does not exist.")

    apply_overrides(config, overrides)

    if "RATCUBICS_OUT_DIR" in os.environ:
        config.enumeration_output_dir = os.environ["RATCUBICS_OUT_DIR"]

    return config


def emit(args: argparse.Namespace, payload: dict, text: str):
    if args.json:
        print(json.dumps({"schema": SCHEMA_VERSION, **payload}))
    else:
        print(text)


def read_map(args: argparse.Namespace) -> RationalMap3:
    return converters.parse_coefficients(args.coeffs, args.order).validate()


def command_invariants(args: argparse.Namespace, config: Config):
    phi = read_map(args).primitive()
    record = build_record(tuple(int(c) for c in phi.c), config.checks_log_locus_mismatches)
    payload = record.to_json()

    text = "\n".join([
        f"coeffs:       {tuple(record.coeffs)}",
        f"h:            {record.naive_height}",
        f"xi:           ({', '.join(str(x) for x in record.xi_raw)})",
        f"xi (wgcd):    {tuple(record.xi_normalized.coords)}",
        f"wheight:      {record.weighted_height:.2f} (normalized {record.weighted_height_normalized:.2f})",
        f"I6:           {record.i6}",
        f"J6:           {record.j6}",
        f"aut:          {record.aut_label.text}",
        f"abs:          ({', '.join(str(i) for i in record.abs_invariants.as_tuple())})",
    ])
    emit(args, payload, text)


def command_classify(args: argparse.Namespace, config: Config):
    label = classify(read_map(args), config.checks_log_locus_mismatches)
    emit(args, {"aut": label.text, "aut_code": label.code}, label.text)


def command_conjugate(args: argparse.Namespace, config: Config):
    phi = read_map(args)
    sigma = converters.mobius_from_json(args.sigma.replace(" ", "").split(","))
    psi = conjugate_map(phi, sigma).primitive()
    emit(args, {"coeffs": converters.map_to_json(psi)}, ",".join(str(c) for c in psi.c))


def command_generate(args: argparse.Namespace, config: Config):
    if args.height is not None:
        config.enumeration_height = args.height
    if args.dedupe_antipodal is not None:
        config.enumeration_dedupe_antipodal = args.dedupe_antipodal
    if args.workers is not None:
        config.enumeration_workers = args.workers

    enumeration = EnumerationConfig.from_config(config, output_path=args.out)
    result = Enumerator(enumeration).run()
    emit(args, {"output": result.output_path, "total": result.total, "stats": result.stats.to_json()},
         result.stats.format_table())


def read_records(path: str) -> list[DatasetRecord]:
    if path.endswith(".csv"):
        return read_csv(path)
    return read_jsonl(path)


def command_stats(args: argparse.Namespace, config: Config):
    records = read_records(args.input)
    if args.csv:
        write_csv(records, args.csv)
    table = stats(records)
    emit(args, {"stats": table.to_json()}, table.format_table())


def command_ml(args: argparse.Namespace, config: Config):
    if args.trees is not None:
        config.forest_trees = args.trees
    if args.seed is not None:
        config.forest_seed = args.seed
    if args.test_fraction is not None:
        config.forest_test_fraction = args.test_fraction
    if args.weighted is not None:
        config.forest_weighted = args.weighted == "on"
    if args.features is not None:
        config.forest_features = args.features
    if args.workers is not None:
        config.forest_workers = args.workers

    experiment = ForestExperiment.from_config(read_records(args.input), config)
    if config.forest_features == "all":
        runs = experiment.run_all()
    else:
        runs = [experiment.baseline(), experiment.run(config.forest_features, config.forest_weighted)]

    if args.report:
        experiment.write_report(runs, args.report)
    emit(args, experiment.report(runs), ForestExperiment.format_text(runs))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Invariants, automorphism groups and a height-bounded "
                                                 "database of degree-3 rational maps.")
    parser.add_argument("-config", "-c", type=str, default="config.ini",
                        help="Path to the config file. (default: config.ini)")
    parser.add_argument("-config-override", "-co", action="append",
                        help="Override a config option. Use the form option=value, e.g. forest.seed=43.")
    parser.add_argument("-loglevel", "-log", "-l", type=str, default="INFO",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"])
    output = argparse.ArgumentParser(add_help=False)
    output.add_argument("--json", action="store_true", help="Print machine-readable JSON.")

    commands = parser.add_subparsers(dest="command", required=True)

    def map_command(name: str, help_: str) -> argparse.ArgumentParser:
        command = commands.add_parser(name, parents=[output], help=help_)
        command.add_argument("--coeffs", type=str, required=True,
                             help="c0,...,c7. In the default descending order c0..c3 multiply z^3, z^2, z, 1 "
                                  "in the numerator and c4..c7 do the same in the denominator; this is the "
                                  "order of the database keys. A leading minus sign is fine, "
                                  "as in --coeffs -3,0,0,1,0,1,0,0.")
        command.add_argument("--order", choices=["descending", "ascending"], default="descending",
                             help="Read each block of four coefficients from z^3 down (descending) "
                                  "or from 1 up (ascending). (default: descending)")
        return command

    map_command("invariants", "Print the database record of one map.").set_defaults(handler=command_invariants)
    map_command("classify", "Print the automorphism group of one map.").set_defaults(handler=command_classify)

    conjugate = map_command("conjugate", "Conjugate a map by a Moebius transformation.")
    conjugate.add_argument("--sigma", type=str, required=True, help="a,b,c,e for sigma(z) = (az + b)/(cz + e).")
    conjugate.set_defaults(handler=command_conjugate)

    generate = commands.add_parser("generate", parents=[output], help="Enumerate all maps up to a naive height.")
    generate.add_argument("--height", type=int, help="Naive height bound. (default: enumeration.height)")
    generate.add_argument("--dedupe-antipodal", action=argparse.BooleanOptionalAction, default=None,
                          help="Identify c with -c. (default: enumeration.dedupe-antipodal)")
    generate.add_argument("--workers", type=int, help="Worker processes. (default: enumeration.workers)")
    generate.add_argument("--out", type=str, help="Output JSONL path. (default: <output-dir>/maps_h<H>.jsonl)")
    generate.set_defaults(handler=command_generate)

    stats_ = commands.add_parser("stats", parents=[output], help="Count automorphism groups per naive height.")
    stats_.add_argument("input", type=str, help="JSONL or CSV database.")
    stats_.add_argument("--csv", type=str, help="Also export the records as CSV to this path.")
    stats_.set_defaults(handler=command_stats)

    ml = commands.add_parser("ml", parents=[output], help="Run the random-forest experiment on a database.")
    ml.add_argument("input", type=str, help="JSONL or CSV database.")
    ml.add_argument("--features", choices=["coeffs", "invariants", "all"],
                    help="Feature set; 'all' runs both sets, weighted and unweighted. (default: forest.features)")
    ml.add_argument("--trees", type=int, help="Number of trees. (default: forest.trees)")
    ml.add_argument("--seed", type=int, help="Master seed. (default: forest.seed)")
    ml.add_argument("--test-fraction", type=float, help="Test share per class. (default: forest.test-fraction)")
    ml.add_argument("--weighted", choices=["on", "off"], help="Class weighting. (default: forest.weighted)")
    ml.add_argument("--workers", type=int, help="Threads training trees. (default: forest.workers)")
    ml.add_argument("--report", type=str, help="Write the JSON report to this path.")
    ml.set_defaults(handler=command_ml)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(attach_list_values(sys.argv[1:] if argv is None else argv))

    logging.basicConfig(level=args.loglevel, style="{", format=f"[{{name}}] {{levelname}}: {{message}}",
                        stream=sys.stderr if args.json else sys.stdout)
    logger = logging.getLogger("ratcubics")

    try:
        config = load_config(args.config, args.config_override or [])
        logger.debug(" ".join(f"{option}={value}" for option, value in config.export_options().items()))
        args.handler(args, config)
    except (PreconditionError, RecordFormatError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except Exception as e:
        logger.error(f"Command {args.command!r} failed.", exc_info=e)
        return 1

    return 0


if __name__ == "__main__":
    sys.exit(main())
