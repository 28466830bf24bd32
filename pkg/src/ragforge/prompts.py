"""Prompt templates for the chat pipeline.

Two template kinds exist: the *custom* prompt that instructs the assistant and
receives the question plus retrieved context, and the *condense* prompt that
rewrites a conversation plus follow-up into one standalone question. Each
ships in two profiles: the default wording and a sharper revision used for the
public-event deployment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping

_PLACEHOLDER_RE = re.compile(r"\{([a-z_]+)\}")

REQUIRED_SLOTS = {
    "custom": {"question", "context"},
    "condense": {"chat_history", "question"},
}


class PromptKind(str, Enum):
    CUSTOM = "custom"
    CONDENSE = "condense"


class PromptError(ValueError):
    pass


@dataclass(frozen=True)
class PromptTemplate:
    kind: PromptKind
    body: str

    def __post_init__(self):
        found = set(_PLACEHOLDER_RE.findall(self.body))
        required = REQUIRED_SLOTS[self.kind.value]
        missing = required - found
        if missing:
            raise PromptError(f"{self.kind.value} template is missing placeholders: {sorted(missing)}")
        unknown = found - {"question", "context", "chat_history"}
        if unknown:
            raise PromptError(f"{self.kind.value} template has unknown placeholders: {sorted(unknown)}")

    @property
    def placeholders(self) -> set[str]:
        return set(_PLACEHOLDER_RE.findall(self.body))


CUSTOM_PROMPT = PromptTemplate(
    kind=PromptKind.CUSTOM,
    body=(
        "Sei unipa-gpt, il chatbot e assistente virtuale dell'Università degli Studi di Palermo.\n"
        "Rispondi cordialmente e in forma colloquiale alle domande che ti vengono poste.\n"
        "Se ricevi un saluto, rispondi salutando e presentandoti.\n"
        "Se ricevi una domanda riguardante l'università degli studi di Palermo,\n"
        "rispondi in base ai documenti che ti vengono dati insieme alla domanda.\n"
        "Se non sai rispondere, scusati e suggerisci di consultare il sito web, non inventare risposte.\n"
        "Question: {question}\n"
        "Documenti: {context}"
    ),
)

CONDENSE_PROMPT = PromptTemplate(
    kind=PromptKind.CONDENSE,
    body=(
        "Data la seguente conversazione e la domanda successiva, riformula la domanda successiva\n"
        "in modo tale sia una domanda singola.\n"
        "Conversazione: {chat_history}\n"
        "Domanda succesiva: {question}\n"
        "Domanda singola:"
    ),
)

SHARPER_CUSTOM_PROMPT = PromptTemplate(
    kind=PromptKind.CUSTOM,
    body=(
        "Sono Unipa-GPT, chatbot e assistente virtuale dell'Università degli Studi di Palermo\n"
        "che risponde cordialmente e in forma colloquiale.\n"
        "Ai saluti, rispondi salutando e presentandoti;\n"
        'Rispondi alla domanda con la dicitura "Risposta: "\n'
        "Ricordati che il rettore dell'Università è il professore Massimo Midiri.\n"
        "Se la domanda riguarda l'università degli studi di Palermo,\n"
        "rispondi in base alle informazioni e riporta i link ad esse associate;\n"
        "Se non sai rispondere alla domanda, rispondi dicendo che sei un'intelligenza artificiale\n"
        "che ha ancora molto da imparare e suggerisci\n"
        "di andare su https://www.unipa.it/, non inventare risposte.\n"
        "Domanda: {question}\n"
        "Informazioni: {context}"
    ),
)

SHARPER_CONDENSE_PROMPT = CONDENSE_PROMPT


def custom_template(sharper: bool = False) -> PromptTemplate:
    return SHARPER_CUSTOM_PROMPT if sharper else CUSTOM_PROMPT


def condense_template(sharper: bool = False) -> PromptTemplate:
    return SHARPER_CONDENSE_PROMPT if sharper else CONDENSE_PROMPT


def substitute(body: str, bindings: Mapping[str, str]) -> str:
    """Substitute placeholder slots byte-for-byte, no other transformation.

    A single pass over ``body``: placeholders appearing inside binding values
    are inserted literally, never re-expanded. A body without placeholders
    comes back unchanged.
    """

    def _lookup(match: re.Match) -> str:
        name = match.group(1)
        if name not in bindings:
            raise PromptError(f"missing binding for placeholder {{{name}}}")
        return bindings[name]

    return _PLACEHOLDER_RE.sub(_lookup, body)


def render_prompt(template: PromptTemplate, bindings: Mapping[str, str]) -> str:
    return substitute(template.body, bindings)


def join_context(texts: Iterable[str]) -> str:
    """Joins retrieved document texts with a blank line, keeping rank order."""
    return "\n\n".join(texts)


def serialize_history(turns: Iterable[tuple[str, str]]) -> str:
    """Serialize (question, answer) turns as ``Utente:``/``Assistente:`` line pairs."""
    lines = []
    for question, answer in turns:
        lines.append(f"Utente: {question}")
        lines.append(f"Assistente: {answer}")
    return "\n".join(lines)
