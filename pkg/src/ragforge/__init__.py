"""ragforge: retrieval-augmented chat over a university course catalog.

Corpus construction, chunked vector retrieval, condense-then-answer chat
prompting, fine-tune dataset export, an offline evaluation harness and an
HTTP chat service with feedback logging.
"""

__version__ = "0.1.0"
