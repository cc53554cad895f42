from hypothesis import strategies as st

from mcgcert.words import Letter, Word, slide, transposition, twist

SYMBOLS = [twist("a", "+"), twist("a", "-"), twist("b", "+"), slide("mu", "a"),
           slide("mu", "a", True), transposition("mu", "a", "+"), transposition("nu", "b", "-")]

letters = st.builds(Letter, st.sampled_from(SYMBOLS), st.sampled_from([1, -1]))
raw_words = st.lists(letters, max_size=24)
words = raw_words.map(Word)
# small alphabet so that cancellations are common
tight = st.lists(st.builds(Letter, st.sampled_from(SYMBOLS[:2]), st.sampled_from([1, -1])),
                 max_size=30)
small_words = st.lists(letters, max_size=6).map(Word)
