"""English suffix-stripping stemmer (Porter's 1980 algorithm)."""

from __future__ import annotations

_VOWELS = frozenset("aeiou")


def identity_stemmer(word: str) -> str:
    """Stemmer that leaves every token unchanged. Useful in tests."""
    return word


class PorterStemmer:
    """Deterministic Porter stemmer over lowercase ASCII words."""

    def stem(self, word: str) -> str:
        if len(word) <= 2:
            return word
        word = self._step1ab(word)
        word = self._step1c(word)
        word = self._step2(word)
        word = self._step3(word)
        word = self._step4(word)
        word = self._step5(word)
        return word

    __call__ = stem

    # --- helpers -----------------------------------------------------------

    @staticmethod
    def _is_cons(word: str, i: int) -> bool:
        ch = word[i]
        if ch in _VOWELS:
            return False
        if ch == "y":
            return i == 0 or not PorterStemmer._is_cons(word, i - 1)
        return True

    @classmethod
    def _measure(cls, stem: str) -> int:
        # number of VC sequences in the stem
        m = 0
        prev_vowel = False
        for i in range(len(stem)):
            cons = cls._is_cons(stem, i)
            if cons and prev_vowel:
                m += 1
            prev_vowel = not cons
        return m

    @classmethod
    def _has_vowel(cls, stem: str) -> bool:
        return any(not cls._is_cons(stem, i) for i in range(len(stem)))

    @classmethod
    def _ends_double_cons(cls, word: str) -> bool:
        return (
            len(word) >= 2
            and word[-1] == word[-2]
            and cls._is_cons(word, len(word) - 1)
        )

    @classmethod
    def _ends_cvc(cls, word: str) -> bool:
        if len(word) < 3:
            return False
        if not (
            cls._is_cons(word, len(word) - 3)
            and not cls._is_cons(word, len(word) - 2)
            and cls._is_cons(word, len(word) - 1)
        ):
            return False
        return word[-1] not in "wxy"

    # --- steps -------------------------------------------------------------

    def _step1ab(self, word: str) -> str:
        if word.endswith("sses"):
            word = word[:-2]
        elif word.endswith("ies"):
            word = word[:-2]
        elif word.endswith("ss"):
            pass
        elif word.endswith("s"):
            word = word[:-1]

        if word.endswith("eed"):
            if self._measure(word[:-3]) > 0:
                word = word[:-1]
        else:
            flag = False
            if word.endswith("ed") and self._has_vowel(word[:-2]):
                word, flag = word[:-2], True
            elif word.endswith("ing") and self._has_vowel(word[:-3]):
                word, flag = word[:-3], True
            if flag:
                if word.endswith(("at", "bl", "iz")):
                    word += "e"
                elif self._ends_double_cons(word) and word[-1] not in "lsz":
                    word = word[:-1]
                elif self._measure(word) == 1 and self._ends_cvc(word):
                    word += "e"
        return word

    def _step1c(self, word: str) -> str:
        if word.endswith("y") and self._has_vowel(word[:-1]):
            word = word[:-1] + "i"
        return word

    _STEP2 = (
        ("ational", "ate"), ("tional", "tion"), ("enci", "ence"),
        ("anci", "ance"), ("izer", "ize"), ("abli", "able"), ("alli", "al"),
        ("entli", "ent"), ("eli", "e"), ("ousli", "ous"), ("ization", "ize"),
        ("ation", "ate"), ("ator", "ate"), ("alism", "al"),
        ("iveness", "ive"), ("fulness", "ful"), ("ousness", "ous"),
        ("aliti", "al"), ("iviti", "ive"), ("biliti", "ble"),
    )

    _STEP3 = (
        ("icate", "ic"), ("ative", ""), ("alize", "al"), ("iciti", "ic"),
        ("ical", "ic"), ("ful", ""), ("ness", ""),
    )

    _STEP4 = (
        "al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement",
        "ment", "ent", "ion", "ou", "ism", "ate", "iti", "ous", "ive", "ize",
    )

    def _step2(self, word: str) -> str:
        for suffix, repl in sorted(self._STEP2, key=lambda p: -len(p[0])):
            if word.endswith(suffix):
                stem = word[: -len(suffix)]
                if self._measure(stem) > 0:
                    return stem + repl
                return word
        return word

    def _step3(self, word: str) -> str:
        for suffix, repl in sorted(self._STEP3, key=lambda p: -len(p[0])):
            if word.endswith(suffix):
                stem = word[: -len(suffix)]
                if self._measure(stem) > 0:
                    return stem + repl
                return word
        return word

    def _step4(self, word: str) -> str:
        for suffix in sorted(self._STEP4, key=len, reverse=True):
            if word.endswith(suffix):
                stem = word[: -len(suffix)]
                if suffix == "ion" and not stem.endswith(("s", "t")):
                    return word
                if self._measure(stem) > 1:
                    return stem
                return word
        return word

    def _step5(self, word: str) -> str:
        if word.endswith("e"):
            stem = word[:-1]
            m = self._measure(stem)
            if m > 1 or (m == 1 and not self._ends_cvc(stem)):
                word = stem
        if word.endswith("ll") and self._measure(word[:-1]) > 1:
            word = word[:-1]
        return word
