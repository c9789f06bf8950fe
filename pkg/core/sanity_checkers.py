from .exceptions import ConfigError, ParameterError
from .helper_classes import COMMANDS, QUANTITIES, Z_SCALES, RunConfig
from .systems import Family, SipSystem


def sanity_checking_with_arguments(args: RunConfig) -> RunConfig:
    """ Validate a RunConfig; every failure names the offending field """
    if args.command not in COMMANDS:
        raise ConfigError(f'Invalid command => {args.command}.', field='command')
    try:
        args.family = Family.parse(args.family).value
    except ParameterError as e:
        raise ConfigError(str(e), field='family')
    try:
        system = SipSystem(args.family, gamma=args.gamma, c=args.c, rho=args.rho, nu=args.nu, kappa=args.kappa,
                           alpha=args.alpha, strict=args.strict_system)
    except ParameterError as e:
        raise ConfigError(str(e), field=_parameter_field(args.family, str(e)))

    if not args.m_list or any(m < 0 for m in args.m_list):
        raise ConfigError(f'm_list must hold nonnegative integers. Currently:{args.m_list}', field='m_list')
    if args.quantity is not None and args.quantity not in QUANTITIES:
        raise ConfigError(f'Invalid quantity => {args.quantity}. Expected one of {QUANTITIES}', field='quantity')
    if args.method not in ('generic', 'closed'):
        raise ConfigError(f'Invalid method => {args.method}. Expected generic or closed', field='method')
    if args.z_scale not in Z_SCALES:
        raise ConfigError(f'Invalid z_scale => {args.z_scale}. Expected one of {Z_SCALES}', field='z_scale')
    if args.z_count < 2:
        raise ConfigError(f'z_count must be at least 2. Currently:{args.z_count}', field='z_count')
    if not 0 < args.z_min < args.z_max:
        raise ConfigError(f'Need 0 < z_min < z_max. Currently:{args.z_min}, {args.z_max}', field='z_min')
    limit = system.convergence_radius ** (2 if args.z_scale == 'abs2' else 1)
    if _uses_grid(args) and not args.z_max < limit:
        raise ConfigError(f'z_max={args.z_max} reaches the radius of convergence of {system}', field='z_max')
    if args.n_max < 0:
        raise ConfigError(f'n_max can not be negative. Currently:{args.n_max}', field='n_max')
    if args.command in ('stats', 'pnd') or args.quantity == 'pnd':
        if args.z is None:
            raise ConfigError(f'{args.command} needs the amplitude z', field='z')
    if args.z is not None and not 0 <= args.z < system.convergence_radius:
        raise ConfigError(f'|z|={args.z} lies outside the disc of {system}', field='z')
    if args.moment_orders < 1 or args.moment_m_max < 0:
        raise ConfigError('moment_orders must be positive and moment_m_max nonnegative', field='moment_orders')
    return args


def _uses_grid(args: RunConfig) -> bool:
    if args.command in ('weight', 'sweep'):
        return True
    return args.command.startswith('fig') and args.quantity != 'pnd'


def _parameter_field(family: str, message: str) -> str:
    for name in ('gamma', 'kappa', 'rho', 'nu'):
        if name in message:
            return name
    return 'c' if family == Family.DType.value else 'family'
