"""End-to-end compilation pipeline: author text -> domain bundle edits.

One :class:`Pipeline` holds the loaded resources for a session; its
``process_text`` routes each sentence (affordance markers first, then affect
markers, then state extraction), applies the edits with per-sentence
atomicity, and regenerates the suggestion list.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .affect_extraction import (
    AffectLexicon,
    AffectParseError,
    extract_set_phrase,
    parse_affect_change,
    split_affect_sentence,
)
from .affordance_extraction import (
    AffordanceDraft,
    MarkerCatalog,
    UnifyOutcome,
    derive_affordance_name,
    detect_probability,
    load_probability_keywords,
    split_affordance,
    unify_condition,
)
from .catalogs import default_emotion_catalog, default_motivation_catalog
from .config import PipelineConfig
from .domain_model import (
    Affordance,
    AffectRule,
    Cnf,
    DomainBundle,
    DomainError,
    Literal,
    PostCondition,
    StateKind,
    StateTriple,
    slugify,
)
from .ingestion import (
    Lexicon,
    SentenceGraph,
    builtin_parse,
    classify_state_kind,
    parse_conllu,
    propn_mentions,
    resolve_coreferences,
    simplify,
    split_text,
)
from .semantics import EmbeddingTable, PhraseFilters, load_embeddings
from .state_extraction import (
    MissingSubjectError,
    RelationRule,
    build_state_decls,
    extract_triples,
    load_rules,
)
from .suggestions import (
    ConceptNetClient,
    FixtureConceptNet,
    HttpConceptNet,
    RecordingConceptNet,
    Suggestion,
    commonsense_suggestions,
    flag_incomplete_affordances,
    propose_missing_rules,
    sort_suggestions,
)

CATEGORIES = ("state", "affordance", "affect")


@dataclass
class Resources:
    """All catalogs and models one session works with, loaded once."""

    config: PipelineConfig
    lexicon: Lexicon
    markers: MarkerCatalog
    rules: list[RelationRule]
    affect_lexicon: AffectLexicon
    probability_keywords: dict[str, float]
    filters: PhraseFilters
    embeddings: EmbeddingTable
    conceptnet: ConceptNetClient

    @staticmethod
    def load(config: PipelineConfig | None = None) -> "Resources":
        config = config or PipelineConfig()
        if config.conceptnet_url:
            client: ConceptNetClient = HttpConceptNet(config.conceptnet_url)
            if config.conceptnet_record_path:
                client = RecordingConceptNet(client, config.conceptnet_record_path)
        else:
            client = FixtureConceptNet(config.conceptnet_fixtures)
        return Resources(
            config=config,
            lexicon=Lexicon.load(config.lexicon_path),
            markers=MarkerCatalog.load(config.markers_path),
            rules=load_rules(config.rules_path),
            affect_lexicon=AffectLexicon.load(config.affect_lexicon_path),
            probability_keywords=load_probability_keywords(
                config.probability_keywords_path),
            filters=PhraseFilters.load(),
            embeddings=load_embeddings(config.embeddings_path),
            conceptnet=client,
        )


@dataclass
class SentenceOutcome:
    sentence: str
    category: str                      # state | affordance | affect | unmatched
    status: str                        # ok | unmatched | error
    new_states: list[str] = field(default_factory=list)
    matched_states: list[str] = field(default_factory=list)
    affordance: str | None = None
    rule_added: bool = False
    error: str | None = None
    diagnostics: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "sentence": self.sentence,
            "category": self.category,
            "status": self.status,
            "new_states": self.new_states,
            "matched_states": self.matched_states,
            "affordance": self.affordance,
            "rule_added": self.rule_added,
            "error": self.error,
            "diagnostics": self.diagnostics,
        }


@dataclass
class SubmitReport:
    outcomes: list[SentenceOutcome] = field(default_factory=list)
    suggestions: list[Suggestion] = field(default_factory=list)

    @property
    def new_states(self) -> list[str]:
        return [s for o in self.outcomes for s in o.new_states]

    def as_dict(self) -> dict:
        return {
            "sentences": [o.as_dict() for o in self.outcomes],
            "new_states": self.new_states,
            "suggestions": [
                {"id": s.id, "kind": s.kind, "prompt": s.prompt,
                 "score": s.score, "status": s.status}
                for s in self.suggestions
            ],
        }


class Pipeline:
    def __init__(self, resources: Resources):
        self.res = resources
        self.new_bundle_catalogs = (default_emotion_catalog(),
                                    default_motivation_catalog())

    def new_bundle(self) -> DomainBundle:
        emotions, motivations = self.new_bundle_catalogs
        return DomainBundle(emotion_catalog=emotions,
                            motivation_catalog=motivations)

    # -- sentence routing ----------------------------------------------------

    def classify(self, sentence: str) -> str:
        if split_affordance(sentence, self.res.markers) is not None:
            return "affordance"
        if split_affect_sentence(sentence, self.res.markers) is not None:
            return "affect"
        return "state"

    def process_text(self, bundle: DomainBundle, text: str,
                     category: str | None = None, conllu: str | None = None,
                     decided: dict[str, str] | None = None,
                     regenerate: bool = True) -> tuple[DomainBundle, SubmitReport]:
        """Run the pipeline over the text; the input bundle is not mutated."""
        if category is not None and category not in CATEGORIES:
            raise DomainError(f"unknown category {category!r}")
        units: list[tuple[str, SentenceGraph | None]] = []
        if conllu:
            for graph in parse_conllu(conllu):
                units.append((graph.source or graph.render(), graph))
        else:
            for sentence in split_text(text):
                units.append((sentence, None))

        report = SubmitReport()
        mention_context: list[str] = list(bundle.objects)
        for sentence, graph in units:
            route = category or self.classify(sentence)
            work = bundle.clone()
            try:
                if route == "affordance":
                    outcome = self._do_affordance(work, sentence, mention_context)
                elif route == "affect":
                    outcome = self._do_affect(work, sentence, mention_context)
                else:
                    outcome = self._do_state(work, sentence, graph, mention_context)
            except (DomainError, ValueError) as exc:
                outcome = SentenceOutcome(sentence=sentence, category=route,
                                          status="error", error=str(exc))
            if outcome.status != "error":
                bundle = work
                for name in bundle.objects:
                    if name not in mention_context:
                        mention_context.append(name)
            report.outcomes.append(outcome)

        if regenerate:
            report.suggestions = self.generate_suggestions(bundle, decided or {})
        return bundle, report

    # -- routes ---------------------------------------------------------------

    def _parse_segment(self, segment: str, context: list[str],
                       graph: SentenceGraph | None = None) -> list[SentenceGraph]:
        g = graph or builtin_parse(segment, self.res.lexicon,
                                   set(self.res.markers.fluent_keywords))
        if context:
            resolved, _issues = resolve_coreferences([g], context,
                                                     context_mentions=context)
        else:
            resolved = [g]
        return [clause for r in resolved for clause in simplify(r)]

    def _do_state(self, bundle: DomainBundle, sentence: str,
                  graph: SentenceGraph | None,
                  context: list[str]) -> SentenceOutcome:
        outcome = SentenceOutcome(sentence=sentence, category="state", status="ok")
        clauses = self._parse_segment(sentence, context, graph)
        any_triples = False
        for clause in clauses:
            kind = classify_state_kind(clause, self.res.markers.fluent_keywords)
            triples = extract_triples(clause, kind, self.res.rules,
                                      list(self.res.markers.fluent_keywords))
            if not triples:
                continue
            any_triples = True
            before = set(bundle.states)
            ids = build_state_decls(triples, kind, bundle)
            for sid in ids:
                if sid in before:
                    if sid not in outcome.matched_states:
                        outcome.matched_states.append(sid)
                elif sid not in outcome.new_states:
                    outcome.new_states.append(sid)
                before.add(sid)
        if not any_triples:
            outcome.status = "unmatched"
            outcome.diagnostics.append(
                "no extraction rule matched; rephrase or extend the rule catalog")
        return outcome

    def _conditions(self, bundle: DomainBundle, segment: str,
                    context: list[str], outcome: SentenceOutcome) \
            -> list[tuple[Literal | None, UnifyOutcome, str]]:
        """(literal, unify outcome, clause text) per condition clause."""
        results = []
        for clause in self._parse_segment(segment, context):
            triples = extract_triples(clause, StateKind.BINARY, self.res.rules,
                                      list(self.res.markers.fluent_keywords))
            if not triples:
                outcome.diagnostics.append(
                    f"no condition recognized in {clause.render()!r}")
                continue
            for triple in triples:
                unified = unify_condition(
                    triple, bundle, self.res.embeddings,
                    self.res.config.match_threshold, self.res.filters,
                    strict=self.res.config.strict)
                if unified.created:
                    if unified.created not in outcome.new_states:
                        outcome.new_states.append(unified.created)
                elif unified.matched:
                    if unified.matched not in outcome.matched_states:
                        outcome.matched_states.append(unified.matched)
                if unified.proposal is not None:
                    outcome.diagnostics.append(
                        f"condition {unified.proposal} has no matching state "
                        "(strict mode); confirm it as a suggestion")
                results.append((unified.literal, unified, clause.render()))
        return results

    def _do_affordance(self, bundle: DomainBundle, sentence: str,
                       context: list[str]) -> SentenceOutcome:
        outcome = SentenceOutcome(sentence=sentence, category="affordance",
                                  status="ok")
        draft = split_affordance(sentence, self.res.markers)
        if draft is None:
            outcome.status = "unmatched"
            outcome.diagnostics.append("no affordance marker found")
            return outcome
        head_graphs = self._parse_segment(draft.head_text, context)
        head = head_graphs[0]
        name = derive_affordance_name(draft.head_text, head)
        subject = head.child(head.root.index, "nsubj")
        if subject is None:
            raise MissingSubjectError(draft.head_text)
        owner = slugify(subject.lemma)
        bundle.add_object(owner)
        segment_context = context + [owner]

        pre_literals: list[Literal] = []
        if draft.pre_text:
            for literal, unified, _text in self._conditions(
                    bundle, draft.pre_text, segment_context, outcome):
                if literal is not None:
                    pre_literals.append(literal)
        posts: list[PostCondition] = []
        if draft.post_text:
            for literal, unified, clause_text in self._conditions(
                    bundle, draft.post_text, segment_context, outcome):
                if literal is None:
                    continue
                probability = detect_probability(clause_text,
                                                 self.res.probability_keywords)
                posts.append(PostCondition(literal, probability))
                if probability < 1.0:
                    outcome.diagnostics.append(
                        f"postcondition {literal.state} is non-deterministic "
                        f"(p={probability})")

        affordance = Affordance(name=name, owner=owner,
                                preconditions=Cnf.conjunction(pre_literals),
                                postconditions=tuple(posts))
        bundle.add_affordance(affordance)
        outcome.affordance = name
        if not posts:
            outcome.diagnostics.append(
                f"affordance {name!r} has no postconditions yet")
        return outcome

    def _do_affect(self, bundle: DomainBundle, sentence: str,
                   context: list[str]) -> SentenceOutcome:
        outcome = SentenceOutcome(sentence=sentence, category="affect", status="ok")
        parts = split_affect_sentence(sentence, self.res.markers)
        if parts is None:
            outcome.status = "unmatched"
            outcome.diagnostics.append("no affect marker found")
            return outcome
        affect_text, condition_text = parts
        for name in propn_mentions(affect_text, self.res.lexicon):
            bundle.add_object(name)
            context = context + [name]

        factors = bundle.motivation_catalog.factors
        set_hit = extract_set_phrase(condition_text, self.res.affect_lexicon, factors)
        if set_hit is not None:
            target, change, condition_text = set_hit
        else:
            target, change = parse_affect_change(affect_text,
                                                 self.res.affect_lexicon, factors)

        literals = [lit for lit, _u, _t in
                    self._conditions(bundle, condition_text, context, outcome)
                    if lit is not None]
        if not literals:
            raise DomainError(
                f"no condition state recognized in {condition_text!r}")
        rule = AffectRule(condition=Cnf.conjunction(literals), target=target,
                          change=change)
        bundle.add_affect_rule(rule)
        outcome.rule_added = True
        return outcome

    # -- suggestions -----------------------------------------------------------

    def generate_suggestions(self, bundle: DomainBundle,
                             decided: dict[str, str]) -> list[Suggestion]:
        """Feedback plus common-sense suggestions, minus decided ones."""
        items = propose_missing_rules(bundle, self.res.embeddings,
                                      self.res.filters,
                                      self.res.config.suggestion_threshold)
        items += flag_incomplete_affordances(bundle,
                                             self.res.config.min_preconditions,
                                             self.res.config.min_postconditions)
        items += commonsense_suggestions(bundle, self.res.conceptnet,
                                         self.res.embeddings, self.res.filters,
                                         self.res.config.suggestion_threshold,
                                         self.res.config.conceptnet_min_weight,
                                         self.res.config.conceptnet_page_size)
        return sort_suggestions([s for s in items if s.id not in decided])
