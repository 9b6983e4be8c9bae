#!/usr/bin/env python
# coding: utf8
#
# Copyright (c) 2025 sentiforge contributors.
#
# This file is part of sentiforge.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""
    This module implements the pattern-lexicon sentiment scorer (polarity and subjectivity) and the converter from
    pattern-style XML lexicons to the CSV lexicon format.
"""
import os
import re
from importlib import util
from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Optional, Tuple
from xml.etree import ElementTree
import numpy as np
import pandas as pd
from sentiforge.utils.exceptions import DataError

BUNDLED_PATTERN_LEXICON = os.path.join(os.path.dirname(__file__), "data", "pattern_lexicon.csv")
# full English lexicon shipped inside the textblob distribution
UPSTREAM_PATTERN_PACKAGE = "textblob"
UPSTREAM_PATTERN_FILE = os.path.join("en", "en-sentiment.xml")
LEXICON_COLUMNS = ("token", "polarity", "subjectivity", "intensity")
MODIFIER_COLUMN = "modifier"

NEGATIONS = frozenset(("no", "not", "n't", "never"))
# part-of-speech tags marking a word that can modify the next one (adverbs)
MODIFIER_POS = ("RB",)
EXCLAMATION_BOOST = 1.25
NEGATED_POLARITY_FACTOR = -0.5

# contractions split off their word, as in "do n't" or "it 's"
_CONTRACTION = re.compile(r"(?i)(n't|'s|'re|'ve|'ll|'d|'m)$")
_EDGE_PUNCTUATION = ".,;:!?()[]{}\"`'"


class LexiconEntry(NamedTuple):
    polarity: float
    subjectivity: float
    intensity: float
    modifier: bool


@dataclass(frozen=True)
class PatternScore:
    polarity: float
    subjectivity: float


EMPTY_SCORE = PatternScore(polarity=0.0, subjectivity=0.0)


def _clamp(value: float) -> float:
    return max(-1.0, min(value, 1.0))


def upstream_pattern_lexicon() -> Optional[str]:
    """
        Path of the full XML lexicon of the installed textblob package, None when it is not installed.
    """
    spec = util.find_spec(UPSTREAM_PATTERN_PACKAGE)
    if spec is None or not spec.submodule_search_locations:
        return None
    path = os.path.join(list(spec.submodule_search_locations)[0], UPSTREAM_PATTERN_FILE)
    return path if os.path.isfile(path) else None


def default_pattern_lexicon() -> str:
    return upstream_pattern_lexicon() or BUNDLED_PATTERN_LEXICON


def load_pattern_lexicon(path: str = None) -> Dict[str, LexiconEntry]:
    """
        Read a lexicon, either a pattern-style XML file or a CSV file token,polarity,subjectivity,intensity[,modifier].
        Without the CSV modifier column, entries with an intensity different from 1 are modifiers.
        Without a path, the full upstream XML lexicon is read when textblob is installed, the bundled CSV subset
        otherwise.

        Raises:
            DataError: missing column, non-numeric value or unreadable XML.
    """
    path = path or default_pattern_lexicon()
    if path.lower().endswith(".xml"):
        return {form: LexiconEntry(polarity, subjectivity, intensity, modifier)
                for form, polarity, subjectivity, intensity, modifier in read_pattern_xml(path)}
    frame = pd.read_csv(path, dtype=str, keep_default_na=False, na_filter=False, encoding="utf-8")
    missing = [c for c in LEXICON_COLUMNS if c not in frame.columns]
    if missing:
        raise DataError("Pattern lexicon '{}' lacks column '{}'".format(path, missing[0]))
    lexicon = {}
    try:
        for row in frame.itertuples(index=False):
            intensity = float(row.intensity)
            if MODIFIER_COLUMN in frame.columns:
                modifier = str(getattr(row, MODIFIER_COLUMN)).strip().lower() in ("1", "true", "yes")
            else:
                modifier = intensity != 1.0
            lexicon[row.token.lower()] = LexiconEntry(float(row.polarity), float(row.subjectivity), intensity,
                                                      modifier)
    except ValueError as e:
        raise DataError("Pattern lexicon '{}': {}".format(path, e)) from e
    return lexicon


def tokenize(text: str) -> List[str]:
    """
        Lower-cased tokens with punctuation and contractions split off ("Don't!" -> do, n't, !).
    """
    tokens = []
    for chunk in (text or "").lower().split():
        head, tail = [], []
        while chunk and chunk[0] in _EDGE_PUNCTUATION:
            head.append(chunk[0])
            chunk = chunk[1:]
        while chunk and chunk[-1] in _EDGE_PUNCTUATION:
            tail.insert(0, chunk[-1])
            chunk = chunk[:-1]
        tokens.extend(head)
        if chunk:
            match = _CONTRACTION.search(chunk)
            if match and match.start() > 0:
                tokens.extend([chunk[:match.start()], match.group(1)])
            else:
                tokens.append(chunk)
        tokens.extend(tail)
    return tokens


class PatternScorer:
    """
        Pattern-lexicon scorer. Stateless once the lexicon is loaded.
    """

    def __init__(self, lexicon_path: str = None) -> None:
        self.lexicon_path = lexicon_path or default_pattern_lexicon()
        self.lexicon = load_pattern_lexicon(self.lexicon_path)

    def assessments(self, words: List[str]) -> List[tuple]:
        """
            Group the known words of a token list into assessments.
            A modifier scales the next known word, a negation inverts the intensity of what follows and flips
            the final polarity; both survive short words ("not a good"). "!" boosts the previous assessment.

            Returns:
                list of (words, polarity, subjectivity) tuples.
        """
        found = []
        modifier = None
        negation = None
        for w in words:
            entry = self.lexicon.get(w)
            if entry is not None:
                if modifier is None:
                    found.append({"w": [w], "p": entry.polarity, "s": entry.subjectivity,
                                  "i": entry.intensity, "n": 1})
                else:
                    # modified word, e.g. "really good"
                    last = found[-1]
                    last["w"].append(w)
                    last["p"] = _clamp(entry.polarity * last["i"])
                    last["s"] = _clamp(entry.subjectivity * last["i"])
                    last["i"] = entry.intensity
                if negation is not None:
                    last = found[-1]
                    last["w"].insert(0, negation)
                    last["i"] = 1.0 / (last["i"] or 1)
                    last["n"] = -1
                modifier = w if entry.modifier else None
                negation = w if w in NEGATIONS else None
            else:
                if w in NEGATIONS:
                    negation = w
                elif negation and len(w.strip("'")) > 1:
                    negation = None
                if negation is not None and modifier is not None and modifier.endswith("ly"):
                    # negation after an adverb, e.g. "really not good"
                    found[-1]["w"].append(negation)
                    found[-1]["n"] = -1
                    negation = None
                elif modifier and len(w) > 2:
                    modifier = None
                if w == "!" and found:
                    found[-1]["w"].append("!")
                    found[-1]["p"] = _clamp(found[-1]["p"] * EXCLAMATION_BOOST)
        return [(a["w"], a["p"] * NEGATED_POLARITY_FACTOR if a["n"] < 0 else a["p"], a["s"]) for a in found]

    def score(self, text: str) -> PatternScore:
        """
            Score one text as the mean polarity and subjectivity of its assessments.

            Returns:
                the score, (0, 0) when no lexicon word is found.
        """
        found = self.assessments(tokenize(text))
        if not found:
            return EMPTY_SCORE
        return PatternScore(polarity=float(np.mean([a[1] for a in found])),
                            subjectivity=float(np.mean([a[2] for a in found])))


_default_scorer = None


def score_pattern(text: str, scorer: PatternScorer = None) -> PatternScore:
    global _default_scorer
    if scorer is None:
        if _default_scorer is None:
            _default_scorer = PatternScorer()
        scorer = _default_scorer
    return scorer.score(text)


def read_pattern_xml(xml_path: str, min_confidence: float = None) -> List[Tuple[str, float, float, float, bool]]:
    """
        Read a pattern-style XML lexicon (<word form= pos= polarity= subjectivity= intensity= confidence=/>).
        Senses are averaged per part-of-speech, then across parts-of-speech.
        A word is flagged as modifier when one of its senses is an adverb.

        Args:
            xml_path: source XML lexicon.
            min_confidence: drop senses below this confidence (keep all when None).

        Returns:
            (form, polarity, subjectivity, intensity, modifier) rows sorted by form.
    """
    try:
        root = ElementTree.parse(xml_path).getroot()
    except ElementTree.ParseError as e:
        raise DataError("Unreadable XML lexicon '{}': {}".format(xml_path, e)) from e

    senses: Dict[str, Dict[str, list]] = {}
    for word in root.iter("word"):
        form = word.attrib.get("form")
        if not form:
            continue
        if min_confidence is not None and float(word.attrib.get("confidence", 0.0)) < min_confidence:
            continue
        values = (float(word.attrib.get("polarity", 0.0)),
                  float(word.attrib.get("subjectivity", 0.0)),
                  float(word.attrib.get("intensity", 1.0)))
        senses.setdefault(form, {}).setdefault(word.attrib.get("pos"), []).append(values)

    rows = []
    for form in sorted(senses):
        per_pos = [np.mean(np.array(values), axis=0) for values in senses[form].values()]
        polarity, subjectivity, intensity = np.mean(np.array(per_pos), axis=0)
        rows.append((form, float(polarity), float(subjectivity), float(intensity),
                     any(pos in MODIFIER_POS for pos in senses[form])))
    return rows


def convert_pattern_xml(xml_path: str, csv_path: str, min_confidence: float = None) -> int:
    """
        Convert a pattern-style XML lexicon to the CSV lexicon format (with the modifier column).

        Returns:
            number of converted words.
    """
    rows = [[form, repr(polarity), repr(subjectivity), repr(intensity), "true" if modifier else "false"]
            for form, polarity, subjectivity, intensity, modifier in read_pattern_xml(xml_path, min_confidence)]
    frame = pd.DataFrame(rows, columns=list(LEXICON_COLUMNS) + [MODIFIER_COLUMN], dtype=object)
    frame.to_csv(csv_path, index=False, lineterminator="\n", encoding="utf-8")
    return len(rows)
