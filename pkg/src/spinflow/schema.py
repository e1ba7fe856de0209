from spinflow.errors import ConfigError

schema = {
    'curve': {'type': 'string', 'default': 'great_circle'},
    'grid': {
        'type': 'dict',
        'default': {},
        'schema': {
            'n': {'type': 'integer', 'min': 16, 'default': 512},
        }
    },
    'time': {
        'type': 'dict',
        'default': {},
        'schema': {
            'dt': {'type': 'float', 'coerce': float, 'default': 1.0e-3},
            't_final': {'type': 'float', 'coerce': float, 'default': 0.1},
            'output_every': {'type': 'integer', 'min': 1, 'default': 10},
        }
    },
    'nls': {
        'type': 'dict',
        'default': {},
        'schema': {
            'scheme': {'type': 'string', 'allowed': ['split_step', 'implicit'], 'default': 'split_step'},
            'tol_fp': {'type': 'float', 'coerce': float, 'default': 1.0e-12},
            'max_iter': {'type': 'integer', 'min': 1, 'default': 50},
            'dealias': {'type': 'boolean', 'default': False},
        }
    },
    'lift': {
        'type': 'dict',
        'default': {},
        'schema': {
            'branch': {'type': 'string', 'allowed': ['projective', 'strict'], 'default': 'projective'},
            'eps_sing': {'type': 'float', 'coerce': float, 'default': 1.0e-6},
            'safety_radius': {'type': 'float', 'coerce': float, 'default': 0.1},
            'tail_threshold': {'type': 'float', 'coerce': float, 'default': 1.0e-8},
        }
    },
    'backlund': {
        'type': 'dict',
        'default': {},
        'schema': {
            'enabled': {'type': 'boolean', 'default': False},
            'alpha': {'type': 'list', 'items': [{'type': 'number'}, {'type': 'number'}], 'default': [1.0, -1.0]},
            'v': {
                'type': 'list',
                'items': [
                    {'type': 'list', 'items': [{'type': 'number'}, {'type': 'number'}]},
                    {'type': 'list', 'items': [{'type': 'number'}, {'type': 'number'}]},
                ],
                'default': [[1.0, 0.0], [0.0, 1.0]],
            },
        }
    },
    'vfe': {
        'type': 'dict',
        'default': {},
        'schema': {
            'route': {'type': 'string', 'allowed': ['none', 'antiderivative', 'sym', 'both'], 'default': 'none'},
            'seed': {'type': 'string', 'default': 'smoke_ring'},
            'dlambda': {'type': 'float', 'coerce': float, 'default': 1.0e-4},
            'substeps': {'type': 'integer', 'min': 1, 'default': 1},
            'max_substeps': {'type': 'integer', 'min': 1, 'default': 8},
        }
    },
    'output': {
        'type': 'dict',
        'default': {},
        'schema': {
            'dir': {'type': 'string', 'default': 'spinflow_run'},
            'plots': {'type': 'boolean', 'default': True},
        }
    },
}


def validate_config(config):
    from cerberus import Validator
    v = Validator(schema)
    if not v.validate(config or {}):
        key, problem = next(iter(v.errors.items()))
        raise ConfigError(f"Invalid configuration at key '{key}': {problem}")

    config = v.document
    n = config['grid']['n']
    if n & (n - 1):
        raise ConfigError(f"Invalid configuration at key 'grid.n': {n} is not a power of two")
    dt = config['time']['dt']
    if dt <= 0:
        raise ConfigError(f"Invalid configuration at key 'time.dt': {dt} must be positive")
    if config['time']['t_final'] < dt:
        raise ConfigError("Invalid configuration at key 'time.t_final': must be at least time.dt")
    steps = round(config['time']['t_final'] / dt)
    if abs(steps * dt - config['time']['t_final']) > 1e-9 * max(1.0, config['time']['t_final']):
        raise ConfigError("Invalid configuration at key 'time.t_final': must be a whole number of time steps")
    if config['backlund']['enabled'] and abs(config['backlund']['alpha'][1]) < 1e-8:
        raise ConfigError("Invalid configuration at key 'backlund.alpha': imaginary part must be nonzero")
    if config['vfe']['dlambda'] <= 0:
        raise ConfigError("Invalid configuration at key 'vfe.dlambda': must be positive")

    return config
