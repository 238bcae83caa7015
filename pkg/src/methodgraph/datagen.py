"""Bundled sample records and deterministic dataset generation.

``fixture_records`` is the hand-written seven-method sample used across
the documentation and the test suite. ``generate_records`` produces
arbitrarily large synthetic datasets that are clean by construction
(unique acronyms, no dangling references, acyclic, dates consistent
with inheritance), which makes them suitable for scale and equivalence
testing.
"""

from __future__ import annotations

import random

from .schema import BaseRef, EdgeKind, MethodRecord, PartialDate

__all__ = ["fixture_records", "generate_records"]

_GAN_PAPER = dict(
    title="Generative Adversarial Networks",
    url="https://arxiv.org/abs/1406.2661",
    authors=("Ian Goodfellow", "Jean Pouget-Abadie", "Mehdi Mirza"),
    release_date=PartialDate(2014, 6, 10),
    venue="NIPS 2014",
)

_AE_PAPER = dict(
    title="Reducing the Dimensionality of Data with Neural Networks",
    url="https://www.science.org/doi/10.1126/science.1127647",
    authors=("Geoffrey Hinton", "Ruslan Salakhutdinov"),
    release_date=PartialDate(2006, 7, 28),
    venue="Science",
)


def fixture_records() -> list[MethodRecord]:
    """Seven well-known methods forming two linked subject areas."""
    return [
        MethodRecord(
            **_GAN_PAPER,
            method_name="Generative Adversarial Network",
            subject_area="Generative Models",
            acronym="GAN",
            description=(
                "Two networks trained in opposition: a generator forging samples "
                "and a discriminator telling real from fake."
            ),
            based_on=(BaseRef("GEN"), BaseRef("DIS")),
        ),
        MethodRecord(
            **_GAN_PAPER,
            method_name="Generator",
            subject_area="Generative Models",
            acronym="GEN",
            description="The forging half of an adversarial pair; maps noise to samples.",
        ),
        MethodRecord(
            **_GAN_PAPER,
            method_name="Discriminator",
            subject_area="Generative Models",
            acronym="DIS",
            description="Classifies inputs as real data or generated fakes.",
        ),
        MethodRecord(
            title="Adversarial Autoencoders",
            url="https://arxiv.org/abs/1511.05644",
            authors=(
                "Alireza Makhzani",
                "Jonathon Shlens",
                "Navdeep Jaitly",
                "Ian Goodfellow",
            ),
            release_date=PartialDate(2015, 11, 18),
            venue="arXiv",
            method_name="Adversarial Autoencoder",
            subject_area="Generative Models",
            acronym="AAE",
            description=(
                "Autoencoder whose latent code is shaped by an adversarial "
                "discriminator instead of a fixed prior penalty."
            ),
            based_on=(BaseRef("AE"), BaseRef("DIS")),
        ),
        MethodRecord(
            **_AE_PAPER,
            method_name="Autoencoder",
            subject_area="Representation Learning",
            acronym="AE",
            description="Encoder-decoder pair trained to reconstruct its input through a bottleneck.",
            based_on=(BaseRef("ENCDR"), BaseRef("DCDR")),
        ),
        MethodRecord(
            **_AE_PAPER,
            method_name="Encoder",
            subject_area="Representation Learning",
            acronym="ENCDR",
            description="Compresses an input into a low-dimensional code.",
        ),
        MethodRecord(
            **_AE_PAPER,
            method_name="Decoder",
            subject_area="Representation Learning",
            acronym="DCDR",
            description="Reconstructs the input from its compressed code.",
        ),
    ]


_AREAS = (
    "Generative Models",
    "Representation Learning",
    "Reinforcement Learning",
    "Computer Vision",
    "Natural Language Processing",
    "Speech Recognition",
    "Graph Learning",
    "Optimization",
    "Bayesian Methods",
    "Robotics",
    "Time Series",
    "Recommendation Systems",
)

_ADJECTIVES = (
    "Adaptive", "Deep", "Sparse", "Recurrent", "Convolutional", "Variational",
    "Hierarchical", "Attentive", "Residual", "Spectral", "Latent", "Dual",
    "Robust", "Contrastive", "Masked", "Equivariant", "Neural", "Stochastic",
)

_NOUNS = (
    "Network", "Encoder", "Transformer", "Machine", "Field", "Process",
    "Autoencoder", "Forest", "Flow", "Memory", "Planner", "Sampler",
    "Estimator", "Critic", "Propagation", "Alignment", "Kernel", "Policy",
)

_SURNAMES = (
    "Ivanov", "Chen", "Garcia", "Smith", "Kumar", "Tanaka", "Muller",
    "Rossi", "Novak", "Haddad", "Okafor", "Larsen", "Petrov", "Silva",
)

_VENUES = ("NeurIPS", "ICML", "ICLR", "CVPR", "ACL", "AAAI", "arXiv", "JMLR")


def _acronym_for(words: list[str], used: set[str]) -> str:
    base = "".join(w[0] for w in words).upper()
    if len(base) < 3:
        base += words[-1][1:3].upper()
    candidate, suffix = base, 2
    while candidate in used:
        candidate = f"{base}{suffix}"
        suffix += 1
    used.add(candidate)
    return candidate


def generate_records(count: int, seed: int = 0, conceptual_rate: float = 0.1) -> list[MethodRecord]:
    """Generate ``count`` clean records forming a DAG.

    Based-on references only point at earlier records and release dates
    never decrease with position, so the result builds with no issues.
    Deterministic for a given (count, seed).
    """
    rng = random.Random(seed)
    used: set[str] = set()
    records: list[MethodRecord] = []
    for index in range(count):
        words = [rng.choice(_ADJECTIVES), rng.choice(_NOUNS)]
        if rng.random() < 0.4:
            words.insert(1, rng.choice(_ADJECTIVES))
        acronym = _acronym_for(words, used)
        name = " ".join(words)
        year = 1986 + (index * 34) // max(count, 1)
        date = PartialDate(year, rng.randrange(1, 13), rng.randrange(1, 28))
        if records and date.sort_key() < records[-1].release_date.sort_key():
            date = records[-1].release_date  # keep dates monotone within a year

        refs: list[BaseRef] = []
        if index >= 5 and rng.random() > 0.08:
            pool_size = min(index, 60)
            base_count = rng.randrange(1, min(5, index + 1))
            picks = rng.sample(range(index - pool_size, index), min(base_count, pool_size))
            for pick in sorted(picks):
                kind = (
                    EdgeKind.CONCEPTUAL
                    if rng.random() < conceptual_rate
                    else EdgeKind.DIRECT
                )
                refs.append(BaseRef(records[pick].acronym, kind))

        author_count = rng.randrange(1, 5)
        authors = tuple(
            f"{rng.choice('ABCDEFGHJKLMN')}. {rng.choice(_SURNAMES)}"
            for _ in range(author_count)
        )
        records.append(
            MethodRecord(
                title=f"{name}s for Scalable Learning",
                url=f"https://example.org/methods/{acronym.lower()}",
                authors=authors,
                release_date=date,
                venue=f"{rng.choice(_VENUES)} {year}",
                method_name=name,
                subject_area=rng.choice(_AREAS),
                acronym=acronym,
                description=f"{name} trained end to end; entry {index} of the synthetic corpus.",
                based_on=tuple(refs),
            )
        )
    return records
