"""Regenerate the bundled synthetic corpus (deterministic).

Three topics, each with its own vocabulary plus a few words shared across
topics. Per topic there are eight cycle words a1..a4, b1..b4:

  * six "heavy" words and a1..a4 are drawn at random, the heavy ones often;
  * b1..b4 are never drawn at random; they only appear when a sentence
    plants one edge of the cycle a1-b1-a3-b4-a2-b2-a4-b3-a1 as two adjacent
    words.

All of these land near the top of the frequency ranking, split across the
two concepts, and W=5 windows give a handful of violating 4x4 blocks per
topic. Larger windows wash the planted structure out.

    python3 data/synthetic/generate.py
"""
import json
import pathlib
import random

HERE = pathlib.Path(__file__).resolve().parent

SHARED = ["light", "salt", "wind", "water", "night", "cold", "market", "season"]

TOPICS = {
    "astronomy": {
        "documents": 8,
        "cycle": ["planet", "telescope", "comet", "moon", "orbit", "galaxy", "dust", "corona"],
        "heavy": ["star", "sky", "nebula", "gravity", "asteroid", "meteor"],
        "vocabulary": [
            "spectrum", "photon", "quasar", "crater", "rocket", "satellite",
            "observatory", "astronomer", "horizon", "cluster", "supernova",
            "pulsar", "radiation", "vacuum", "cosmos", "ring",
        ],
    },
    "cooking": {
        "documents": 10,
        "cycle": ["flour", "garlic", "pasta", "bread", "dough", "onion", "sauce", "yeast"],
        "heavy": ["oven", "butter", "sugar", "recipe", "kitchen", "chef"],
        "vocabulary": [
            "knife", "pepper", "cream", "tomato", "spoon", "bowl", "basil",
            "olive", "lemon", "honey", "steak", "soup", "rice", "bean", "herb",
            "plate",
        ],
    },
    "sailing": {
        "documents": 12,
        "cycle": ["captain", "anchor", "storm", "mast", "crew", "harbor", "wave", "canvas"],
        "heavy": ["boat", "sail", "ocean", "deck", "rope", "tide"],
        "vocabulary": [
            "compass", "island", "keel", "rudder", "hull", "coast", "current",
            "port", "voyage", "knot", "buoy", "beacon", "dock", "fleet",
            "reef", "chart",
        ],
    },
}

PLANT_RATE = 0.8
FILLER = ["the", "of", "and", "a", "to", "in", "was", "with", "on", "for", "it", "is"]


def cycle_edges(cycle):
    a1, a2, a3, a4, b1, b2, b3, b4 = cycle
    return [(a1, b1), (a3, b1), (a3, b4), (a2, b4), (a2, b2), (a4, b2), (a4, b3), (a1, b3)]


def sentence(rng, words, weights, planted):
    content = rng.choices(words, weights=weights, k=rng.randint(1, 4))
    if rng.random() < PLANT_RATE:
        a, b = rng.choice(planted)
        if rng.random() < 0.5:
            a, b = b, a
        pos = rng.randrange(len(content) + 1)
        content[pos:pos] = [a, b]
    out = []
    for w in content:
        if rng.random() < 0.5:
            out.append(rng.choice(FILLER))
        out.append(w)
    text = " ".join(out)
    return text[0].upper() + text[1:] + "."


def main():
    rng = random.Random(20130812)
    manifest = {"topics": []}
    for topic_id, spec in TOPICS.items():
        words = spec["cycle"][:4] + spec["heavy"] + spec["vocabulary"] + SHARED
        weights = [0.3] * 4 + [1.0] * 6
        weights += [0.3 / (1 + 0.05 * r) for r in range(len(spec["vocabulary"]))]
        weights += [0.2] * len(SHARED)
        planted = cycle_edges(spec["cycle"])
        docs = []
        (HERE / topic_id).mkdir(exist_ok=True)
        for d in range(spec["documents"]):
            n_sentences = rng.randint(25, 45)
            paragraphs = []
            for _ in range(rng.randint(3, 5)):
                k = max(1, n_sentences // 4)
                paragraphs.append(" ".join(
                    sentence(rng, words, weights, planted) for _ in range(k)))
            doc_id = f"{topic_id}-{d + 1:02d}"
            path = pathlib.Path(topic_id) / f"{doc_id}.txt"
            (HERE / path).write_text("\n\n".join(paragraphs) + "\n")
            docs.append({"doc_id": doc_id, "path": str(path)})
        manifest["topics"].append({"topic_id": topic_id, "documents": docs})
    (HERE / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")


if __name__ == "__main__":
    main()
