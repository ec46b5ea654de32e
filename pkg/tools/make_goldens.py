"""Regenerate the golden transcripts and their data files.

Runs each scenario against the live engine with seed 0 and freezes the
agent output line by line. Lines containing the absolute data directory
are stored as regex matches so the transcripts stay portable; user turns
keep the @DIR@ placeholder the replay harness substitutes.

Usage: python3 tools/make_goldens.py
"""

import csv
import json
import re
import sys
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from parlance.pack import build_registry  # noqa: E402
from parlance.replay import response_lines  # noqa: E402
from parlance.session import Session  # noqa: E402

OUT = ROOT / "transcripts"
DATA = OUT / "data"


def write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def make_dogmatism():
    posts = [
        "you are all wrong and i am right",
        "maybe we could look at this differently",
        "i think there is some nuance here",
        "this seems partly true to me",
        "i am quite sure about this one",
        "perhaps both sides have a point",
        "obviously my answer is the only answer",
        "we might want more evidence",
        "my view has not changed at all",
    ]
    scores = [15, 3, 9, 7, 12, 2, 13, 8, 11]
    categories = [
        "politics", "movies", "politics", "science", "religion",
        "movies", "religion", "science", "politics",
    ]
    write_csv(
        DATA / "dogmatism.csv",
        ["post", "score", "category"],
        list(zip(posts, scores, categories)),
    )


def make_flowers():
    rng = np.random.default_rng(7)
    specs = {
        "setosa": (1.4, 0.2, 5.0, 3.4),
        "versicolor": (4.3, 1.3, 5.9, 2.8),
        "virginica": (5.6, 2.1, 6.6, 3.0),
    }
    rows = []
    for species, (pl, pw, sl, sw) in specs.items():
        for _ in range(6):
            rows.append((
                round(pl + rng.normal(0, 0.12), 2),
                round(pw + rng.normal(0, 0.05), 2),
                round(sl + rng.normal(0, 0.15), 2),
                round(sw + rng.normal(0, 0.1), 2),
                species,
            ))
    write_csv(
        DATA / "flowers.csv",
        ["petallength", "petalwidth", "sepallength", "sepalwidth", "species"],
        rows,
    )


def make_reddit():
    dogmatic = [
        "i am absolutely certain you are wrong and this damn thread proves it",
        "obviously my answer is right and i will never change my mind you idiot",
        "this is totally settled and i am definitely done with your stupid hell",
        "i know i am right it is undeniable and your crap argument was always bad",
        "my view is obviously correct and i am certainly not reading that shit",
        "you are absolutely wrong and i was never going to agree with this crap",
        "i am totally sure this is settled and the rest is damn noise",
        "it is certainly obvious to me that my side was always right here",
        "i definitely said it before and i will say it again you are wrong",
        "absolutely nothing you said changes my mind it is hell to read",
    ]
    neutral = [
        "the study design was interesting but the sample was small",
        "there was a follow up paper that measured the same effect",
        "i read the thread and the sources seemed reasonable",
        "the comparison between the two groups was done last year",
        "someone posted the raw data in the other thread",
        "the methods section said they did three replications",
        "the original post had a link that went to the archive",
        "they made a chart of the results and it was clear",
        "the archive copy was easier to read than the original",
        "the moderator said the thread went off topic",
    ]
    friendly = [
        "what a nice thread i am glad people shared such good sources",
        "this was a great discussion and i love the wonderful replies",
        "happy to see the best answers voted up nice work everyone",
        "good points all around i am glad we could share perspectives",
        "what a wonderful community this was a great read",
        "i love how nice and happy this thread turned out",
        "great sources and good faith replies make me glad i subscribed",
        "the best part was the nice summary at the end wonderful job",
        "glad to see such good and happy conversation here",
        "nice thread with great links i am happy i read it",
    ]
    rows = []
    for i, post in enumerate(dogmatic):
        rows.append((post, 13 + (i % 3), "debate"))
    for i, post in enumerate(neutral):
        rows.append((post, 8 + (i % 4), "reading"))
    for i, post in enumerate(friendly):
        rows.append((post, 2 + (i % 4), "social"))
    write_csv(DATA / "reddit.csv", ["post", "score", "category"], rows)


SCENARIOS = {
    "nested_composition.jsonl": [
        "load the csv file at @DIR@/data/dogmatism.csv",
        "save that as dogmatism_data",
        "find quartiles",
        "the score column in dogmatism_data",
    ],
    "column_conversion.jsonl": [
        "load the csv file at @DIR@/data/dogmatism.csv",
        "save that as dogmatism_data",
        "compute quartiles for dogmatism_data",
        "yes",
        "score",
    ],
    "save_and_reuse.jsonl": [
        "load the csv file at @DIR@/data/dogmatism.csv",
        "save that as dogmatism_data",
        "filter dogmatism_data with score > 12",
        "save that as dogmatic_posts",
        "can you show me the post column in dogmatic_posts?",
        "export this conversation as a script",
    ],
    "model_pipeline.jsonl": [
        "load the csv file at @DIR@/data/flowers.csv",
        "save that as flowers",
        "create a classification model",
        "save that as model",
        "train model on flowers to predict species",
        "save that as trained_model",
        "cross-validate model on flowers predicting species with 3 folds",
        "show the coefficients of trained_model",
    ],
    "word_analysis.jsonl": [
        "load the csv file at @DIR@/data/reddit.csv",
        "save that as reddit_data",
        "filter reddit_data with score > 12",
        "save that as dogmatic_posts",
        "filter reddit_data with score < 7",
        "save that as non_dogmatic_posts",
        "liwc analysis on dogmatic_posts",
        "save that as dogmatic_liwc",
        "liwc analysis on non_dogmatic_posts",
        "save that as non_dogmatic_liwc",
        "run mann-whitney tests between the columns in dogmatic_liwc and non_dogmatic_liwc",
        "Mann-Whitney U",
        "apply holm correction to the p values in that",
        "save that as corrected_tests",
        "select significant statistics from corrected_tests",
        "compute odds ratios between dogmatic_liwc and non_dogmatic_liwc",
        "save that as odds",
        "plot odds as a bar chart named odds ratios",
    ],
}


def freeze(name, user_texts):
    base = str(OUT.resolve())
    session = Session(build_registry(), rng_seed=0)
    records = []
    for text in user_texts:
        records.append({"role": "user", "text": text})
        concrete = text.replace("@DIR@", base)
        for resp in session.handle_input(concrete):
            for line in response_lines(resp):
                if base in line:
                    pattern = re.escape(line).replace(re.escape(base), ".*")
                    records.append({"role": "agent", "text": pattern, "match": "regex"})
                else:
                    records.append({"role": "agent", "text": line})
    path = OUT / name
    path.write_text(
        "\n".join(json.dumps(r) for r in records) + "\n", encoding="utf-8"
    )
    print("wrote %s (%d records)" % (path, len(records)))


def main():
    DATA.mkdir(parents=True, exist_ok=True)
    make_dogmatism()
    make_flowers()
    make_reddit()
    for name, texts in SCENARIOS.items():
        freeze(name, texts)


if __name__ == "__main__":
    main()
