"""
structest graph layer

Interaction graphs (RegularGraph and its constructors), the mutable
configurations (SpinConfig, GraphSample) and the raw statistics computed
on them: cut size, quadratic form and wedge count.
"""

from .regular import (
    RegularGraph,
    build_circulant,
    build_random_regular,
    cut_size,
    quadratic_form,
    quadratic_form_direct,
    dumps_graph,
    loads_graph,
    read_graph,
    write_graph,
)
from .sample import (
    SpinConfig,
    GraphSample,
    pair_count,
    pair_index,
    pair_arrays,
    wedge_count,
    wedge_count_by_pairs,
    wedge_delta,
    read_graph_sample,
    read_spin_config,
)

__all__ = [
    'RegularGraph', 'build_circulant', 'build_random_regular', 'cut_size',
    'quadratic_form', 'quadratic_form_direct', 'dumps_graph', 'loads_graph',
    'read_graph', 'write_graph',
    'SpinConfig', 'GraphSample', 'pair_count', 'pair_index', 'pair_arrays',
    'wedge_count', 'wedge_count_by_pairs', 'wedge_delta',
    'read_graph_sample', 'read_spin_config',
]
