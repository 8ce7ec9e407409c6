from osmc.compressor.encoding import (
    MODES,
    Encoding,
    EncodingInputs,
    build_connected,
    build_encoding,
    build_face,
    build_general,
    face_containing,
    prepare,
    query,
    size_report,
)
from osmc.compressor.fingerprint import MERSENNE_61, Fingerprint, FingerprintTree, compose, fingerprint
from osmc.compressor.pattern_tree import PatternTree, build_pattern_tree, build_pattern_tree_reseeding
from osmc.compressor.persistent import VersionedPrefixIndex
from osmc.compressor.fileformat import deserialize, serialize

__all__ = [
    "MODES", "Encoding", "EncodingInputs", "build_connected", "build_encoding", "build_face",
    "build_general", "face_containing", "prepare", "query", "size_report", "MERSENNE_61",
    "Fingerprint", "FingerprintTree", "compose", "fingerprint", "PatternTree", "build_pattern_tree",
    "build_pattern_tree_reseeding", "VersionedPrefixIndex", "deserialize", "serialize",
]
