"""Multilingual geoparsing through machine translation and word alignment.

Text in a source language is translated to English together with a
character-level alignment; an English location tagger runs on the
translation and each English toponym is projected back onto the source.
"""

from __future__ import annotations

from .alignment import (
    AlignmentLink,
    AlignmentParseError,
    BitextSegment,
    CharRange,
    parse_alignment_string,
    serialize_alignment,
)
from .errors import ConfigError
from .evaluation import Metrics, load_gold, score
from .geotag import Gazetteer, GazetteerTagger, TaggerConfig, load_gazetteer, tag_locations
from .pipeline import DocumentResult, Geoparser, PipelineConfig, geoparse_document, run_eval
from .projection import Toponym, ToponymPair, find_source_toponyms, render_pairs
from .providers import (
    FixtureProvider,
    PassThroughProvider,
    RestProvider,
    TranslationRequest,
    TranslationResult,
)
from .repair import AlignmentMap, RepairConfig, build_alignment_map, recover_lost_links

__version__ = "0.1.0"

__all__ = [
    "AlignmentLink",
    "AlignmentMap",
    "AlignmentParseError",
    "BitextSegment",
    "CharRange",
    "ConfigError",
    "DocumentResult",
    "FixtureProvider",
    "Gazetteer",
    "GazetteerTagger",
    "Geoparser",
    "Metrics",
    "PassThroughProvider",
    "PipelineConfig",
    "RepairConfig",
    "RestProvider",
    "TaggerConfig",
    "Toponym",
    "ToponymPair",
    "TranslationRequest",
    "TranslationResult",
    "build_alignment_map",
    "find_source_toponyms",
    "geoparse_document",
    "load_gazetteer",
    "load_gold",
    "parse_alignment_string",
    "recover_lost_links",
    "render_pairs",
    "run_eval",
    "score",
    "serialize_alignment",
    "tag_locations",
]
