"""bitext-forge: build sentence-aligned parallel corpora from bilingual
article archives, with two independent aligners and evaluation tooling."""

__version__ = "0.1.0"

from .corpus import (  # noqa: F401
    AlignMethod,
    AlignmentLink,
    BilingualDictionary,
    Document,
    DocumentPair,
    SentencePair,
    read_corpus,
    read_dictionary,
    write_corpus,
)
