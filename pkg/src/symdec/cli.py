"""``symdec`` command line: sweeps, one-off decodes, symmetry checks, code parameters."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from symdec.codes import NOT_IN_NORMALIZER, StabilizerCode, build_code, code_parameters, logical_class
from symdec.harness import ExperimentConfig, find_crossing, rows_to_csv, run_sweep
from symdec.matching import decode_with_symmetries
from symdec.noise import channel_from_dict
from symdec.pauli import PauliString
from symdec.symmetry import symmetry_from_dict, verify_materialised, verify_system
from symdec.syndrome import events_from_json

FAMILIES = ("surface", "xzzx", "toric", "repetition")


def _load_json(path_or_text: str):
    p = Path(path_or_text)
    if p.exists():
        return json.loads(p.read_text())
    return json.loads(path_or_text)


def _load_code(code: str, d: int | None) -> StabilizerCode:
    if code in FAMILIES:
        if d is None:
            raise click.UsageError(f"--d is required for the {code} family")
        return build_code(code, d)
    return StabilizerCode.from_dict(_load_json(code))


def _verdict(cls) -> str:
    return cls if cls == NOT_IN_NORMALIZER else " ".join(cls)


@click.group()
def main():
    """Matching and union-find decoding for stabilizer codes."""


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--workers", type=int, default=None, help="Worker processes (results do not depend on it).")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="CSV output path.")
def sweep(config_path, workers, out):
    """Monte Carlo sweep over code sizes and error rates."""
    cfg = ExperimentConfig.from_json(Path(config_path).read_text())
    rows = run_sweep(cfg, workers=workers, out=out)
    if (out or cfg.out) is None:
        sys.stdout.write(rows_to_csv(rows))
    if len(cfg.sizes) >= 2 and len(cfg.rates) >= 3:
        for c in find_crossing(rows):
            click.echo(f"# crossing {c}", err=True)


@main.command("decode")
@click.option("--code", required=True, help="Family name or code JSON (file or inline).")
@click.option("--d", type=int, default=None, help="Size for a named family.")
@click.option("--channel", required=True, help="Channel JSON (file or inline).")
@click.option("--events", required=True, help="Events JSON [[g, t], ...] (file or inline).")
@click.option("--decoder", type=click.Choice(["mwpm", "unionfind"]), default="mwpm")
@click.option("--error", default=None, help="Actual error as a Pauli literal, to judge success.")
def decode_cmd(code, d, channel, events, decoder, error):
    """Decode one set of detection events."""
    c = _load_code(code, d)
    ch = channel_from_dict(_load_json(channel))
    ev_text = Path(events).read_text() if Path(events).exists() else events
    ev = events_from_json(ev_text)
    corr = decode_with_symmetries(c, ch, ev, method=decoder).correction
    click.echo(f"correction: {corr.to_literal()}")
    if error is None:
        click.echo(f"logical_class(C): {_verdict(logical_class(c, corr))}")
    else:
        e = PauliString.from_literal(c.n, error)
        click.echo(f"logical_class(CE): {_verdict(logical_class(c, corr * e))}")


@main.command("verify-symmetry")
@click.option("--code", required=True, help="Family name or code JSON (file or inline).")
@click.option("--d", type=int, default=None)
@click.option("--symmetry", required=True, help="Symmetry JSON (file or inline).")
@click.option("--errors", default=None,
              help='Error generators for a system symmetry: "Z", "X", or a JSON list of literals.')
def verify_symmetry_cmd(code, d, symmetry, errors):
    """Check a materialised (or, with --errors, system) symmetry."""
    c = _load_code(code, d)
    sigma = symmetry_from_dict(_load_json(symmetry), c)
    prod = sigma.product(c)
    if errors is None:
        ok = verify_materialised(c, sigma)
        kind = "materialised"
    else:
        if errors in ("X", "Y", "Z"):
            gens = [PauliString.single(c.n, q, errors) for q in range(c.n)]
        else:
            gens = [PauliString.from_literal(c.n, s) for s in _load_json(errors)]
        ok = verify_system(c, sigma, gens)
        kind = "system"
    if ok:
        click.echo(f"PASS {kind} symmetry")
    else:
        click.echo(f"FAIL {kind} symmetry: product = {prod.to_literal()}")
        sys.exit(1)


@main.command()
@click.option("--code", required=True, help="Family name or code JSON (file or inline).")
@click.option("--d", type=int, default=None)
@click.option("--max-weight", type=int, default=None, help="Distance search bound (default: the size).")
def params(code, d, max_weight):
    """Print [[n, k, d]] from rank and exhaustive search."""
    c = _load_code(code, d)
    bound = max_weight if max_weight is not None else max(c.size, 1)
    click.echo(str(code_parameters(c, bound)))


if __name__ == "__main__":
    main()
