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
    This module implements the lexicon-and-rule sentiment scorer: a valence lexicon combined with booster words,
    negations, ALL-CAPS emphasis, punctuation amplification and "but" clause reweighting.
    Scores are returned unrounded.
"""
import os
import math
import string
from importlib import util
from dataclasses import dataclass
from typing import Dict, List, Optional
from sentiforge.utils.exceptions import DataError

BUNDLED_VADER_LEXICON = os.path.join(os.path.dirname(__file__), "data", "vader_lexicon.txt")
# full lexicon shipped inside the vaderSentiment distribution
UPSTREAM_VADER_PACKAGE = "vaderSentiment"
UPSTREAM_VADER_FILE = "vader_lexicon.txt"

# empirically derived mean sentiment intensity rating increase for booster words
B_INCR = 0.293
B_DECR = -0.293
# rating increase for using ALL CAPS to emphasize a word
C_INCR = 0.733
N_SCALAR = -0.74
NORMALIZE_ALPHA = 15
EXCLAMATION_INCR = 0.292
MAX_EXCLAMATIONS = 4
QUESTION_INCR = 0.18
QUESTION_FLOOD = 0.96

NEGATE = frozenset([
    "aint", "arent", "cannot", "cant", "couldnt", "darent", "didnt", "doesnt",
    "ain't", "aren't", "can't", "couldn't", "daren't", "didn't", "doesn't",
    "dont", "hadnt", "hasnt", "havent", "isnt", "mightnt", "mustnt", "neither",
    "don't", "hadn't", "hasn't", "haven't", "isn't", "mightn't", "mustn't",
    "neednt", "needn't", "never", "none", "nope", "nor", "not", "nothing", "nowhere",
    "oughtnt", "shant", "shouldnt", "uhuh", "wasnt", "werent",
    "oughtn't", "shan't", "shouldn't", "uh-uh", "wasn't", "weren't",
    "without", "wont", "wouldnt", "won't", "wouldn't", "rarely", "seldom", "despite"])

# booster/dampener 'intensifiers' or 'degree adverbs'
BOOSTER_DICT = {
    "absolutely": B_INCR, "amazingly": B_INCR, "awfully": B_INCR, "completely": B_INCR, "considerable": B_INCR,
    "considerably": B_INCR, "decidedly": B_INCR, "deeply": B_INCR, "effing": B_INCR, "enormous": B_INCR,
    "enormously": B_INCR, "entirely": B_INCR, "especially": B_INCR, "exceptional": B_INCR,
    "exceptionally": B_INCR, "extreme": B_INCR, "extremely": B_INCR, "fabulously": B_INCR, "flipping": B_INCR,
    "flippin": B_INCR, "frackin": B_INCR, "fracking": B_INCR, "fricking": B_INCR, "frickin": B_INCR,
    "frigging": B_INCR, "friggin": B_INCR, "fully": B_INCR, "fuckin": B_INCR, "fucking": B_INCR,
    "fuggin": B_INCR, "fugging": B_INCR, "greatly": B_INCR, "hella": B_INCR, "highly": B_INCR, "hugely": B_INCR,
    "incredible": B_INCR, "incredibly": B_INCR, "intensely": B_INCR, "major": B_INCR, "majorly": B_INCR,
    "more": B_INCR, "most": B_INCR, "particularly": B_INCR, "purely": B_INCR, "quite": B_INCR, "really": B_INCR,
    "remarkably": B_INCR, "so": B_INCR, "substantially": B_INCR, "thoroughly": B_INCR, "total": B_INCR,
    "totally": B_INCR, "tremendous": B_INCR, "tremendously": B_INCR, "uber": B_INCR, "unbelievably": B_INCR,
    "unusually": B_INCR, "utter": B_INCR, "utterly": B_INCR, "very": B_INCR,
    "almost": B_DECR, "barely": B_DECR, "hardly": B_DECR, "just enough": B_DECR, "kind of": B_DECR,
    "kinda": B_DECR, "kindof": B_DECR, "kind-of": B_DECR, "less": B_DECR, "little": B_DECR, "marginal": B_DECR,
    "marginally": B_DECR, "occasional": B_DECR, "occasionally": B_DECR, "partly": B_DECR, "scarce": B_DECR,
    "scarcely": B_DECR, "slight": B_DECR, "slightly": B_DECR, "somewhat": B_DECR, "sort of": B_DECR,
    "sorta": B_DECR, "sortof": B_DECR, "sort-of": B_DECR}

# idioms containing lexicon words, replacing the valence of the whole expression
SPECIAL_CASES = {"the shit": 3, "the bomb": 3, "bad ass": 1.5, "badass": 1.5, "bus stop": 0.0,
                 "yeah right": -2, "kiss of death": -1.5, "to die for": 3,
                 "beating heart": 3.1, "broken heart": -2.9}


@dataclass(frozen=True)
class VaderScore:
    pos: float
    neg: float
    neu: float
    compound: float


EMPTY_SCORE = VaderScore(pos=0.0, neg=0.0, neu=1.0, compound=0.0)


def upstream_vader_lexicon() -> Optional[str]:
    """
        Path of the full lexicon of the installed vaderSentiment package, None when it is not installed.
    """
    spec = util.find_spec(UPSTREAM_VADER_PACKAGE)
    if spec is None or not spec.submodule_search_locations:
        return None
    path = os.path.join(list(spec.submodule_search_locations)[0], UPSTREAM_VADER_FILE)
    return path if os.path.isfile(path) else None


def default_vader_lexicon() -> str:
    return upstream_vader_lexicon() or BUNDLED_VADER_LEXICON


def load_vader_lexicon(path: str = None) -> Dict[str, float]:
    """
        Read a tab-separated lexicon: token<TAB>valence[<TAB>extra columns ignored].
        Without a path, the full upstream lexicon is read when vaderSentiment is installed, the bundled subset
        otherwise.

        Raises:
            DataError: line without a numeric valence.
    """
    path = path or default_vader_lexicon()
    lexicon = {}
    with open(path, "r", encoding="utf-8") as stream:
        for number, line in enumerate(stream, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            fields = line.strip().split("\t")
            try:
                lexicon[fields[0]] = float(fields[1])
            except (IndexError, ValueError) as e:
                raise DataError("{}:{}: expected 'token<TAB>valence'".format(path, number)) from e
    return lexicon


def negated(word: str) -> bool:
    word = word.lower()
    return word in NEGATE or "n't" in word


def normalize(score: float, alpha: float = NORMALIZE_ALPHA) -> float:
    """
        Map an unbounded valence sum to [-1, 1].
    """
    norm_score = score / math.sqrt((score * score) + alpha)
    return max(-1.0, min(1.0, norm_score))


def tokenize(text: str) -> List[str]:
    """
        Split on whitespace and strip the surrounding punctuation of words.
        Tokens that would shrink to two characters or less are kept whole (emoticons, "ok.").
    """
    tokens = []
    for token in text.split():
        stripped = token.strip(string.punctuation)
        tokens.append(token if len(stripped) <= 2 else stripped)
    return tokens


def allcap_differential(words: List[str]) -> bool:
    """
        True when some, but not all, tokens are ALL CAPS.
    """
    allcap_words = sum(1 for word in words if word.isupper())
    return 0 < len(words) - allcap_words < len(words)


def scalar_inc_dec(word: str, valence: float, is_cap_diff: bool) -> float:
    """
        Valence shift contributed by a preceding booster or dampener.
    """
    scalar = 0.0
    word_lower = word.lower()
    if word_lower in BOOSTER_DICT:
        scalar = BOOSTER_DICT[word_lower]
        if valence < 0:
            scalar *= -1
        if word.isupper() and is_cap_diff:
            scalar += C_INCR if valence > 0 else -C_INCR
    return scalar


def amplify_punctuation(text: str) -> float:
    ep_count = min(text.count("!"), MAX_EXCLAMATIONS)
    qm_count = text.count("?")
    qm_amplifier = 0.0
    if qm_count > 1:
        qm_amplifier = qm_count * QUESTION_INCR if qm_count <= 3 else QUESTION_FLOOD
    return ep_count * EXCLAMATION_INCR + qm_amplifier


def but_check(words: List[str], sentiments: List[float]) -> List[float]:
    """
        Halve the valences before the first "but" and raise those after it by half.
    """
    lowered = [w.lower() for w in words]
    if "but" not in lowered:
        return sentiments
    bi = lowered.index("but")
    return [s * 0.5 if k < bi else s * 1.5 if k > bi else s for k, s in enumerate(sentiments)]


class VaderScorer:
    """
        Lexicon-and-rule scorer. Stateless once the lexicon is loaded.
    """

    def __init__(self, lexicon_path: str = None) -> None:
        self.lexicon_path = lexicon_path or default_vader_lexicon()
        self.lexicon = load_vader_lexicon(self.lexicon_path)

    def score(self, text: str) -> VaderScore:
        """
            Score one text.

            Args:
                text: any string.

            Returns:
                pos, neg, neu proportions and the normalized compound score; (0, 0, 1, 0) for text without tokens.
        """
        words = tokenize(text or "")
        if not words:
            return EMPTY_SCORE
        is_cap_diff = allcap_differential(words)

        sentiments = []
        for i, item in enumerate(words):
            lower = item.lower()
            # boosters and "kind of" carry no valence of their own
            if lower in BOOSTER_DICT or (lower == "kind" and i < len(words) - 1 and words[i + 1].lower() == "of"):
                sentiments.append(0.0)
                continue
            sentiments.append(self._valence(words, i, is_cap_diff))

        sentiments = but_check(words, sentiments)
        return self._score_valence(sentiments, text)

    def _valence(self, words: List[str], i: int, is_cap_diff: bool) -> float:
        item = words[i]
        item_lower = item.lower()
        if item_lower not in self.lexicon:
            return 0.0
        lowered = [w.lower() for w in words]
        valence = self.lexicon[item_lower]

        # "no" followed by a lexicon word negates it rather than counting itself
        if item_lower == "no" and i != len(words) - 1 and lowered[i + 1] in self.lexicon:
            valence = 0.0
        if (i > 0 and lowered[i - 1] == "no") or (i > 1 and lowered[i - 2] == "no") \
                or (i > 2 and lowered[i - 3] == "no" and lowered[i - 1] in ("or", "nor")):
            valence = self.lexicon[item_lower] * N_SCALAR

        if item.isupper() and is_cap_diff:
            valence += C_INCR if valence > 0 else -C_INCR

        for start_i in range(0, 3):
            # modifiers up to three words back, dampened with distance
            if i > start_i and lowered[i - (start_i + 1)] not in self.lexicon:
                s = scalar_inc_dec(words[i - (start_i + 1)], valence, is_cap_diff)
                if start_i == 1:
                    s *= 0.95
                elif start_i == 2:
                    s *= 0.9
                valence += s
                valence = self._negation_check(valence, lowered, start_i, i)
                if start_i == 2:
                    valence = self._special_idioms_check(valence, lowered, i)

        return self._least_check(valence, lowered, i)

    @staticmethod
    def _negation_check(valence: float, lowered: List[str], start_i: int, i: int) -> float:
        if start_i == 0:
            if negated(lowered[i - 1]):
                valence *= N_SCALAR
        elif start_i == 1:
            if lowered[i - 2] == "never" and lowered[i - 1] in ("so", "this"):
                valence *= 1.25
            elif lowered[i - 2] == "without" and lowered[i - 1] == "doubt":
                pass
            elif negated(lowered[i - 2]):
                valence *= N_SCALAR
        else:
            # "so"/"this" right before the word intensifies whether or not "never" opens the window
            if (lowered[i - 3] == "never" and lowered[i - 2] in ("so", "this")) or lowered[i - 1] in ("so", "this"):
                valence *= 1.25
            elif lowered[i - 3] == "without" and "doubt" in (lowered[i - 2], lowered[i - 1]):
                pass
            elif negated(lowered[i - 3]):
                valence *= N_SCALAR
        return valence

    @staticmethod
    def _special_idioms_check(valence: float, lowered: List[str], i: int) -> float:
        onezero = "{} {}".format(lowered[i - 1], lowered[i])
        twoonezero = "{} {} {}".format(lowered[i - 2], lowered[i - 1], lowered[i])
        twoone = "{} {}".format(lowered[i - 2], lowered[i - 1])
        threetwoone = "{} {} {}".format(lowered[i - 3], lowered[i - 2], lowered[i - 1])
        threetwo = "{} {}".format(lowered[i - 3], lowered[i - 2])

        for sequence in (onezero, twoonezero, twoone, threetwoone, threetwo):
            if sequence in SPECIAL_CASES:
                valence = SPECIAL_CASES[sequence]
                break
        if len(lowered) - 1 > i:
            zeroone = "{} {}".format(lowered[i], lowered[i + 1])
            if zeroone in SPECIAL_CASES:
                valence = SPECIAL_CASES[zeroone]
        if len(lowered) - 1 > i + 1:
            zeroonetwo = "{} {} {}".format(lowered[i], lowered[i + 1], lowered[i + 2])
            if zeroonetwo in SPECIAL_CASES:
                valence = SPECIAL_CASES[zeroonetwo]

        # booster bi-grams and tri-grams such as "sort of" or "kind of"
        for n_gram in (threetwoone, threetwo, twoone):
            if n_gram in BOOSTER_DICT:
                valence += BOOSTER_DICT[n_gram]
        return valence

    def _least_check(self, valence: float, lowered: List[str], i: int) -> float:
        if i > 0 and lowered[i - 1] == "least" and lowered[i - 1] not in self.lexicon:
            if i == 1 or lowered[i - 2] not in ("at", "very"):
                valence *= N_SCALAR
        return valence

    @staticmethod
    def _score_valence(sentiments: List[float], text: str) -> VaderScore:
        sum_s = float(sum(sentiments))
        punct_emph_amplifier = amplify_punctuation(text)
        if sum_s > 0:
            sum_s += punct_emph_amplifier
        elif sum_s < 0:
            sum_s -= punct_emph_amplifier
        compound = normalize(sum_s)

        # neutral words count as 1, so signed words are shifted by one
        pos_sum = sum(s + 1 for s in sentiments if s > 0)
        neg_sum = sum(s - 1 for s in sentiments if s < 0)
        neu_count = sum(1 for s in sentiments if s == 0)

        if pos_sum > math.fabs(neg_sum):
            pos_sum += punct_emph_amplifier
        elif pos_sum < math.fabs(neg_sum):
            neg_sum -= punct_emph_amplifier

        total = pos_sum + math.fabs(neg_sum) + neu_count
        return VaderScore(pos=math.fabs(pos_sum / total),
                          neg=math.fabs(neg_sum / total),
                          neu=math.fabs(neu_count / total),
                          compound=compound)


_default_scorer = None


def score_vader(text: str, scorer: VaderScorer = None) -> VaderScore:
    """
        Score a text with the given scorer or with the default lexicon.
    """
    global _default_scorer
    if scorer is None:
        if _default_scorer is None:
            _default_scorer = VaderScorer()
        scorer = _default_scorer
    return scorer.score(text)
