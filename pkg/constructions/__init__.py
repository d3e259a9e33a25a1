# constructions/__init__.py
"""
Full code constructions: serial concatenation, single-level and multilevel
bipartite-graph codes.
"""

from constructions.serial import (
    SerialCode, SerialDecodeResult, serial_encode, serial_decode, serial_params, component_concatenation,
)
from constructions.expander import (
    BGCode, ModifiedBGCode, DecodeResult, ModifiedDecodeResult, ReliabilityTable,
    bg_encode, bg_member, basic_decode, reliability_pass, modified_decode, unsatisfied_constraints,
)
from constructions.multilevel import (
    MLExpanderCode, MultilevelDecodeResult, StageState, ml_encode, ml_member, ml_decode, ml_params,
    uniform_degrees,
)

__all__ = [
    'SerialCode', 'SerialDecodeResult', 'serial_encode', 'serial_decode', 'serial_params',
    'component_concatenation',
    'BGCode', 'ModifiedBGCode', 'DecodeResult', 'ModifiedDecodeResult', 'ReliabilityTable',
    'bg_encode', 'bg_member', 'basic_decode', 'reliability_pass', 'modified_decode', 'unsatisfied_constraints',
    'MLExpanderCode', 'MultilevelDecodeResult', 'StageState', 'ml_encode', 'ml_member', 'ml_decode', 'ml_params',
    'uniform_degrees',
]
