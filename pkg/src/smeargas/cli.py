"""Command-line interface.

Subcommands: ``transmit``, ``sweep``, ``ratio``, ``mft`` and ``cloud``.
Exit codes: 0 success, 2 configuration/domain error, 3 numeric error
(underflow, quadrature non-convergence, undefined ratio).
"""

from __future__ import annotations

import argparse
import io
import sys

from smeargas.errors import ConfigError, DomainError, NumericError
from smeargas.gascloud import mean_free_time, mean_speed, number_density, sample_cloud
from smeargas.harness import csvio
from smeargas.harness.config import default_config, load_config
from smeargas.harness.runs import run_ratio, run_sweep
from smeargas.transmittance import Method, transmittance
from smeargas.wavepacket import SpreadMode, WavePacketSpec, expected_sigma

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def _common(p):
    p.add_argument("--config", help="scenario config file (key = value)")
    p.add_argument("--seed", type=int, help="base seed (overrides run.seed)")
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--method", choices=[m.value for m in Method],
                   help="scattering method (overrides model.method)")
    p.add_argument("--repeats", type=int, help="number of seeded repeats")
    p.add_argument("--workers", type=int, default=1, help="thread-pool size for repeats")


def build_parser():
    parser = _Parser(prog="smeargas", description="Smeared-gas transmittance model.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("transmit", help="TR of one sampled cloud")
    _common(p)
    p.add_argument("--size", type=float, help="detector size (m), overrides detector.size_m")

    p = sub.add_parser("sweep", help="TR versus detector size, CSV table")
    _common(p)
    p.add_argument("--sizes", help="comma-separated detector sizes (m)")

    p = sub.add_parser("ratio", help="paired small/large detector ratio")
    _common(p)
    p.add_argument("--small", type=float, help="small detector size (m)")
    p.add_argument("--large", type=float, help="large detector size (m)")

    p = sub.add_parser("mft", help="mean free time and packet width")
    _common(p)
    p.add_argument("--pressure", type=float, help="pressure (Pa)")
    p.add_argument("--temperature", type=float, help="temperature (K)")

    p = sub.add_parser("cloud", help="sample a cloud and dump positions")
    _common(p)
    return parser


def _config(args):
    cfg = load_config(args.config) if args.config else default_config()
    overrides = {}
    if args.seed is not None:
        overrides["run.seed"] = str(args.seed)
    if args.method is not None:
        overrides["model.method"] = args.method
    if getattr(args, "size", None) is not None:
        overrides["detector.size_m"] = repr(args.size)
    if getattr(args, "pressure", None) is not None:
        overrides["cloud.pressure_pa"] = repr(args.pressure)
    if getattr(args, "temperature", None) is not None:
        overrides["cloud.temperature_k"] = repr(args.temperature)
    return cfg.replace(**overrides) if overrides else cfg


def _emit(text, args, stdout):
    if args.out:
        csvio.write_text(text, args.out)
    else:
        stdout.write(text)


def cmd_transmit(args, stdout):
    cfg = _config(args)
    cloud = sample_cloud(cfg.cloud_spec())
    params = cfg.scatter_params()
    res = transmittance(cloud, cfg.setup, params, cfg.method, cfg.quad_tol)
    header = ("method", "size_m", "seed", "n_particles", "n_inside", "sigma_m",
              "tr", "log_tr", "underflow", "cloud_hash")
    row = (res.method.value, cfg.setup.r_t, cfg.seed, res.n_particles, res.n_inside_tunnel,
           params.sigma, res.tr, res.log_tr, res.underflow, cloud.digest())
    text = (csvio.meta_lines("transmit", seed=cfg.seed)
            + csvio.csv_line(header) + csvio.csv_line(row))
    if args.out:
        csvio.write_text(text, args.out)
        stdout.write(f"TR = {res.tr!r}\n")
    else:
        stdout.write(text)
    if res.underflow:
        raise NumericError("transmittance underflowed below the smallest normal double")


def cmd_sweep(args, stdout):
    cfg = _config(args)
    sizes = None
    if args.sizes:
        try:
            sizes = [float(s) for s in args.sizes.split(",") if s.strip()]
        except ValueError as exc:
            raise ConfigError(f"--sizes: {exc}") from exc
    table = run_sweep(cfg, sizes=sizes, repeats=args.repeats, workers=args.workers)
    _emit(csvio.sweep_csv(table, base_seed=cfg.seed), args, stdout)
    if any(r.underflow for r in table.rows):
        raise NumericError("transmittance underflowed for at least one sweep row")


def cmd_ratio(args, stdout):
    cfg = _config(args)
    report = run_ratio(cfg, small=args.small, large=args.large, repeats=args.repeats,
                       workers=args.workers)
    text = csvio.ratio_csv(report)
    if args.out:
        csvio.write_text(text, args.out)
    else:
        stdout.write(text)
    stdout.write(csvio.ratio_summary(report))


def cmd_mft(args, stdout):
    cfg = _config(args)
    sp = cfg.species
    t_bar = mean_free_time(sp, cfg.pressure, cfg.temperature)
    packet = WavePacketSpec(sp.mass, sp.sigma0)
    header = ("species", "pressure_pa", "temperature_k", "number_density_m3", "mean_speed_m_s",
              "t_bar_s", "sigma0_m", "sigma_at_mean_time_m", "sigma_expected_m")
    row = (sp.name, cfg.pressure, cfg.temperature, number_density(cfg.pressure, cfg.temperature),
           mean_speed(sp.mass, cfg.temperature), t_bar, sp.sigma0,
           expected_sigma(packet, t_bar, SpreadMode.AT_MEAN_TIME),
           expected_sigma(packet, t_bar, SpreadMode.EXPECTED_OVER_EXPONENTIAL))
    _emit(csvio.meta_lines("mft") + csvio.csv_line(header) + csvio.csv_line(row), args, stdout)


def cmd_cloud(args, stdout):
    cfg = _config(args)
    cloud = sample_cloud(cfg.cloud_spec())
    _emit(csvio.cloud_csv(cloud), args, stdout)


COMMANDS = {
    "transmit": cmd_transmit,
    "sweep": cmd_sweep,
    "ratio": cmd_ratio,
    "mft": cmd_mft,
    "cloud": cmd_cloud,
}


def main(argv=None, stdout=None, stderr=None):
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        args = build_parser().parse_args(argv)
        COMMANDS[args.command](args, stdout)
    except (ConfigError, DomainError) as exc:
        stderr.write(f"smeargas: error: {exc}\n")
        return EXIT_CONFIG
    except NumericError as exc:
        stderr.write(f"smeargas: numeric error: {exc}\n")
        return EXIT_NUMERIC
    except OSError as exc:
        stderr.write(f"smeargas: error: {exc}\n")
        return EXIT_CONFIG
    return EXIT_OK


def run(argv):
    """Run the CLI in-process; returns (exit code, stdout text, stderr text)."""
    out, err = io.StringIO(), io.StringIO()
    code = main(argv, out, err)
    return code, out.getvalue(), err.getvalue()
