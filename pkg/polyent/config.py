from astropy.config import ConfigNamespace, ConfigItem

__all__ = ['conf']


class Conf(ConfigNamespace):
    """Configuration parameters."""

    tolerance = ConfigItem(1e-9, 'Comparison tolerance for numeric-mode rank vectors')
    max_ground_size = ConfigItem(24, 'Largest ground set stored as a dense 2^n vector')
    exhaustive_pair_limit = ConfigItem(12, 'Largest ground set for which the axiom check enumerates all subset pairs')
    rational_max_denominator = ConfigItem(1000000, 'Denominator bound when rationalizing numeric vectors for the LP')
    copy_schedule_size = ConfigItem(4, 'Bound on |B|+|C| for the default copy schedule')

    max_sample_space = ConfigItem(4096, 'Largest explicit sample space p^d for entropic realizations')
    max_prime = ConfigItem(101, 'Largest field characteristic for linear realizations')
    max_linear_dim = ConfigItem(12, 'Largest ambient dimension for linear realizations')
    max_linear_elements = ConfigItem(16, 'Largest ground set for linear rank vectors')

    isomorphism_order_limit = ConfigItem(8, 'Largest group order for brute-force isomorphism search')

    # Preset data shipped in polyent.data
    groups_file = ConfigItem('groups.toml', 'Preset multiplication tables')
    presentations_file = ConfigItem('presentations.toml', 'Preset symmetric triangular presentations')
    inequalities_file = ConfigItem('inequalities.toml', 'Non-Shannon inequalities (external data)')

conf = Conf()
