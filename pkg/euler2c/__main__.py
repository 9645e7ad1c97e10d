import logging
import sys
from typing import List, Optional, TextIO

from docopt import docopt, DocoptExit

import euler2c
from euler2c.contact import minimum_at_zero_check, transversality_audit
from euler2c.core import (
    Component, EnergyMomentum, OrbitKind, classify, critical_constants)
from euler2c.dynamics import integrate, sample_state
from euler2c.errors import DomainError, Euler2cError
from euler2c.index import COLLISION_KINDS, cz_exterior, cz_interior
from euler2c.periods import critical_orbit_periods
from euler2c.rotation import critical_rotation, trace_torus_family
from euler2c.verify import run_checks
from euler2c.writer import (
    FAMILY_FIELDS, SCAN_FIELDS, TRAJECTORY_FIELDS, RecordWriter,
    format_real, trajectory_rows)

HELP = """
Rotation numbers, periods and Conley-Zehnder indices of the Euler
problem of two fixed centers.

Usage:
  {p} [-h]
  {p} scan [-d] --mu=<mu> --c-min=<c> --c-max=<c> --g-min=<g> --g-max=<g> \
      [--c-steps=<n>] [--g-steps=<n>] [--output=<file>]
  {p} cz [-d] --mu=<mu> --c=<c> --orbit=<orbit> [--cover=<n>]
  {p} rotation [-d] --mu=<mu> --c=<c> (--g=<g> | --orbit=<orbit>)
  {p} trace [-d] --mu=<mu> --k=<k> --l=<l> --c-min=<c> --c-max=<c> \
      [--step=<s>] [--output=<file>]
  {p} integrate [-d] --mu=<mu> --c=<c> --g=<g> --tau=<t> \
      [--component=<comp>] [--output=<file>]
  {p} contact-audit [-d] --mu=<mu> --c=<c> [--samples=<n>] [--seed=<n>]
  {p} verify [-d] [--level=<level>] [--seed=<n>]

Options:
  -h --help            Show this help.
  -d --debug           Show debug messages.
  --mu=<mu>            Mass ratio of the Moon, 0 < mu <= 1/2.
  --c=<c>              Energy (negative).
  --g=<g>              Value of the first integral.
  --c-min=<c>          Lower end of the energy range.
  --c-max=<c>          Upper end of the energy range.
  --g-min=<g>          Lower end of the g range.
  --g-max=<g>          Upper end of the g range.
  --c-steps=<n>        Number of energies [default: 100].
  --g-steps=<n>        Number of g values [default: 100].
  --orbit=<orbit>      Critical orbit: int, extE, extM, dou, hyp or ell.
                       Only int, extE and extM for cz.
  --cover=<n>          Even covering number [default: 2].
  --k=<k>              Numerator of the rotation number k/l.
  --l=<l>              Denominator of the rotation number k/l.
  --step=<s>           Energy step of the family tracing [default: 0.01].
  --tau=<t>            Integration time.
  --component=<comp>   Earth or Moon, for the S-region [default: Earth].
  --samples=<n>        Number of Hill-region samples [default: 10000].
  --seed=<n>           Seed of the random streams [default: 0].
  --level=<level>      quick or full [default: quick].
  --output=<file>      Write the CSV to this file instead of stdout.

Exit status:
  0 success, 1 failed verification, 2 usage or domain error.

Example:

  python -m {p} cz --mu=0.5 --c=-3 --orbit=extE --cover=2

  prints the Conley-Zehnder index 3 of the doubly covered exterior
  collision orbit as a JSON object.
""".format(p='euler2c')

logger = logging.getLogger('euler2c')

_console_handler = logging.StreamHandler()
_console_handler.setLevel(logging.DEBUG)
_console_handler.setFormatter(
    logging.Formatter('%(levelname)s:%(name)s:%(lineno)s:%(message)s')
)


def _set_logger(debug: bool) -> None:
    log_level = logging.DEBUG if debug else logging.INFO
    for target in ('euler2c',):
        target_logger = logging.getLogger(target)
        target_logger.setLevel(log_level)
        if _console_handler not in target_logger.handlers:
            target_logger.addHandler(_console_handler)


def _open_output(path: Optional[str]) -> TextIO:
    if path is None:
        return sys.stdout

    return open(path, 'w', encoding='utf-8', newline='')


def _orbit(value: str) -> OrbitKind:
    try:
        return OrbitKind(value)
    except ValueError:
        raise DomainError("Unknown orbit '{}'".format(value))


def _component(value: str) -> Component:
    try:
        return Component(value.capitalize())
    except ValueError:
        raise DomainError("Unknown component '{}'".format(value))


def cmd_scan(args) -> int:
    fp = _open_output(args['--output'])
    try:
        writer = RecordWriter(fp, SCAN_FIELDS)
        writer.print_header()
        n = writer.print_rows(record.as_row() for record in euler2c.scan(
            float(args['--mu']),
            float(args['--c-min']), float(args['--c-max']),
            int(args['--c-steps']),
            float(args['--g-min']), float(args['--g-max']),
            int(args['--g-steps'])))
    finally:
        if fp is not sys.stdout:
            fp.close()

    logger.info("{} points scanned.".format(n))
    return 0


def cmd_cz(args) -> int:
    params = critical_constants(float(args['--mu']))
    c = float(args['--c'])
    kind = _orbit(args['--orbit'])
    cover = int(args['--cover'])
    if kind not in COLLISION_KINDS:
        raise DomainError(
            "The index is computed for the collision orbits int, extE "
            "and extM, got {}".format(kind.value))

    if kind == OrbitKind.INTERIOR:
        result = cz_interior(params, c, cover)
    elif kind == OrbitKind.EXTERIOR_EARTH:
        result = cz_exterior(params, c, cover, Component.EARTH)
    else:
        result = cz_exterior(params, c, cover, Component.MOON)

    rotation = critical_rotation(params, c, kind)
    periods = critical_orbit_periods(params, c, kind)
    record = {
        'mu': params.mu, 'c': c, 'orbit': kind.value, 'cover': cover,
        'rotation': format_real(rotation.value, rotation.exact),
        'periods': {'tau_xi': periods.tau_xi, 'tau_eta': periods.tau_eta},
        'degenerate': result.degenerate,
    }
    if result.degenerate:
        record['resonance'] = result.resonance
    else:
        record['index'] = result.index

    RecordWriter().print_json(record)
    return 0


def cmd_rotation(args) -> int:
    params = critical_constants(float(args['--mu']))
    c = float(args['--c'])
    if args['--orbit'] is not None:
        kind = _orbit(args['--orbit'])
        rotation = critical_rotation(params, c, kind)
        periods = critical_orbit_periods(params, c, kind)
        record = {
            'mu': params.mu, 'c': c, 'orbit': kind.value,
            'rotation': format_real(rotation.value, rotation.exact),
            'tau_xi': periods.tau_xi, 'tau_eta': periods.tau_eta,
        }
    else:
        em = EnergyMomentum(params, float(args['--g']), c)
        point = euler2c.scan_point(em)
        if point.rotation is None:
            raise DomainError(
                "No rotation number at (g, c) = ({}, {}): {}".format(
                    em.g, c, point.region))
        record = {
            'mu': params.mu, 'g': em.g, 'c': c, 'region': point.region,
            'rotation': format_real(
                point.rotation.value, point.rotation.exact),
            'tau_xi': point.tau_xi, 'tau_eta': point.tau_eta,
        }

    RecordWriter().print_json(record)
    return 0


def cmd_trace(args) -> int:
    params = critical_constants(float(args['--mu']))
    curve = trace_torus_family(
        params, int(args['--k']), int(args['--l']),
        float(args['--c-min']), float(args['--c-max']),
        float(args['--step']))

    fp = _open_output(args['--output'])
    try:
        writer = RecordWriter(fp, FAMILY_FIELDS)
        writer.print_header()
        writer.print_rows({
            'c': format_real(sample.c), 'g': format_real(sample.g),
            'region': sample.region.value} for sample in curve.samples)
    finally:
        if fp is not sys.stdout:
            fp.close()

    for kind, c in curve.endpoints.items():
        logger.info("The family meets the {} orbit at c={}".format(
            kind.value, format_real(c)))
    if curve.omitted:
        logger.info("{} energies without a torus of the family.".format(
            len(curve.omitted)))

    return 0


def cmd_integrate(args) -> int:
    params = critical_constants(float(args['--mu']))
    em = EnergyMomentum(params, float(args['--g']), float(args['--c']))
    tag = classify(em)
    if not tag.region.is_regular:
        raise DomainError("({}, {}) is not a regular point: {}".format(
            em.g, em.c, tag.name))

    state = sample_state(em, _component(args['--component']))
    traj = integrate(params, em.c, state, float(args['--tau']))

    fp = _open_output(args['--output'])
    try:
        writer = RecordWriter(fp, TRAJECTORY_FIELDS)
        writer.print_header()
        writer.print_rows(trajectory_rows(traj))
    finally:
        if fp is not sys.stdout:
            fp.close()

    logger.info("{} steps, energy drift {:.3g}".format(
        len(traj.taus), traj.energy_drift))
    return 0


def cmd_contact_audit(args) -> int:
    params = critical_constants(float(args['--mu']))
    c = float(args['--c'])
    report = transversality_audit(
        params, c, int(args['--samples']), int(args['--seed']))
    radii = [0.01 + 0.98 * i / 99 for i in range(100)]
    off_zero = [r for r in radii
                if not minimum_at_zero_check(params, r).minimum_at_zero]

    RecordWriter().print_json({
        'mu': params.mu, 'c': c, 'samples': report.samples,
        'min_value': report.min_value,
        'argmin': {'r': report.argmin.r, 'theta': report.argmin.theta},
        'max_radius': report.max_radius,
        'boundary_radius': report.boundary_radius,
        'l_earth': report.l_earth,
        'transverse': report.transverse,
        'contained': report.contained,
        'radial_minimum_at_zero': not off_zero,
    })
    return 0 if report.ok and not off_zero else 1


def cmd_verify(args) -> int:
    level = args['--level']
    if level not in ('quick', 'full'):
        raise DomainError("Unknown level '{}'".format(level))

    report = run_checks(level, int(args['--seed']))
    for check in report.checks:
        print("{} {}".format(
            'PASS' if check.passed else 'FAIL', check.name), file=sys.stderr)

    RecordWriter().print_json(report.as_dict())
    if not report.passed:
        print("Failed: {}".format(', '.join(report.failures)),
              file=sys.stderr)
        return 1

    return 0


COMMANDS = (
    ('scan', cmd_scan),
    ('cz', cmd_cz),
    ('rotation', cmd_rotation),
    ('trace', cmd_trace),
    ('integrate', cmd_integrate),
    ('contact-audit', cmd_contact_audit),
    ('verify', cmd_verify),
)


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = docopt(HELP, argv=argv)
    except DocoptExit as e:
        print(e, file=sys.stderr)
        return 2

    _set_logger(args['--debug'])
    for name, command in COMMANDS:
        if not args[name]:
            continue

        try:
            return command(args)
        except (DomainError, ValueError) as e:
            logger.error(e)
            return 2
        except Euler2cError as e:
            logger.error(e)
            return 1

    print(HELP, file=sys.stderr)
    return 0


if __name__ == '__main__':
    sys.exit(main())
