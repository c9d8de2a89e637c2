"""
Settings for the witnesses app are all namespaced in the WITNESSES setting.
For example your project's `settings.py` file might look like this:

WITNESSES = {
    'ORACLE_MAX_VERTICES': 12,
    'ORACLE_BUDGET': 5_000_000,
}

Access values through `witness_settings`, which falls back to DEFAULTS:

    from witnesses.conf import witness_settings
    witness_settings.ORACLE_BUDGET
"""
from django.conf import settings
from django.core.signals import setting_changed

DEFAULTS = {
    'HOLE_SEARCH_NODES': 1_000_000,
    'HOLE_LIMIT': 100_000,
    'CLIQUE_LIMIT': 100_000,
    'ORACLE_MAX_VERTICES': 10,
    'ORACLE_BUDGET': 1_000_000,
    'ORACLE_MAX_K': None,
    'VERIFY_EACH_STEP': True,
    'ELIMINATION_ORDER': 'mcs',
    'ORDER_RESTARTS': 32,
    'GENERATOR_ATTEMPTS': 200,
    'SEED': 0,
}


class WitnessSettings:
    def __init__(self, user_settings=None, defaults=None):
        self._user_settings = user_settings
        self.defaults = defaults or DEFAULTS
        self._cached_attrs = set()

    @property
    def user_settings(self):
        if self._user_settings is None:
            self._user_settings = getattr(settings, 'WITNESSES', {})
        return self._user_settings

    def __getattr__(self, attr):
        if attr not in self.defaults:
            raise AttributeError("Invalid witnesses setting: '%s'" % attr)

        try:
            val = self.user_settings[attr]
        except KeyError:
            val = self.defaults[attr]

        self._cached_attrs.add(attr)
        setattr(self, attr, val)
        return val

    def as_dict(self):
        return {key: getattr(self, key) for key in self.defaults}

    def reload(self):
        for attr in self._cached_attrs:
            delattr(self, attr)
        self._cached_attrs.clear()
        if hasattr(self, '_user_settings'):
            self._user_settings = None


witness_settings = WitnessSettings(None, DEFAULTS)


def resolve(value, name):
    """Return `value` unless it is None, else the configured setting `name`."""
    return getattr(witness_settings, name) if value is None else value


def reload_witness_settings(*args, **kwargs):
    if kwargs['setting'] == 'WITNESSES':
        witness_settings.reload()


setting_changed.connect(reload_witness_settings)
