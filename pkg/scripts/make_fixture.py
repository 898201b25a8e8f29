#!/usr/bin/env python3
"""Generate the bundled synthetic tweet fixture.

Two planted 10-user groups retweet densely inside themselves (every ordered
pair once), so at k=4 clique percolation must recover exactly the two groups.
Each group tweets from its own hashtag pool; background users add sparse
noise, malformed lines exercise the parser, and profile descriptions feed the
term-frequency table.

Usage: python3 scripts/make_fixture.py [out_path]
"""

import json
import random
import sys
from datetime import datetime, timedelta, timezone

GROUP_TAGS = {
    0: ["guns", "gunsaretools", "peopleareweapons", "deepstatecabal", "superelite"],
    1: ["msm", "fakenews", "qrevolution", "patriotsfight", "maga"],
}
BACKGROUND_TAGS = ["wwg1wga", "thestorm", "draintheswamp", "potus", "trump"]
DESCRIPTIONS = [
    "Proud MAGA patriot. God, country, Trump.",
    "Conservative Christian. Love my country. NRA member.",
    "Truth seeker. WWG1WGA.",
    "Patriot and proud American. Trump 2020.",
    "",
]


def make_lines(seed: int = 20180629) -> list[str]:
    rng = random.Random(seed)
    start = datetime(2018, 6, 29, tzinfo=timezone.utc)
    groups = {g: [f"g{g}_user{i:02d}" for i in range(10)] for g in (0, 1)}
    background = [f"bg_user{i:02d}" for i in range(30)]
    lines = []
    tid = 0

    def emit(user, text, retweet_of=None, description=None):
        nonlocal tid
        tid += 1
        obj = {
            "tweet_id": f"t{tid:05d}",
            "user_id": user,
            "created_at": (start + timedelta(minutes=tid)).isoformat(),
            "text": text,
        }
        if retweet_of:
            obj["retweet_of_user_id"] = retweet_of
        if description is not None:
            obj["user_description"] = description
        lines.append(json.dumps(obj, sort_keys=True))

    for g, members in groups.items():
        for u in members:
            tags = rng.sample(GROUP_TAGS[g], 3)
            emit(
                u,
                "Big news #QAnon " + " ".join("#" + t for t in tags),
                description=rng.choice(DESCRIPTIONS),
            )
        # every ordered in-group pair retweets once -> K10 after symmetrizing
        for u in members:
            for v in members:
                if u != v:
                    emit(u, f"RT @{v}: the #q drop is real", retweet_of=v)
    for u in background:
        tags = rng.sample(BACKGROUND_TAGS, 2)
        emit(
            u,
            "qanon thread " + " ".join("#" + t for t in tags),
            description=rng.choice(DESCRIPTIONS),
        )
        # sparse noise retweets; far too thin to form 4-cliques
        if rng.random() < 0.5:
            target = rng.choice(background)
            if target != u:
                emit(u, f"RT @{target}: qanon update", retweet_of=target)
    # a handful of malformed lines for the parser to skip
    for junk in ("{not json", '{"tweet_id": "x"}', "[1, 2, 3]"):
        lines.append(junk)
    # and some off-topic records the keyword filter must drop
    emit("offtopic1", "quantum anomaly research")
    emit("offtopic2", "cute cat pictures #cats")
    return lines


def main() -> None:
    out = sys.argv[1] if len(sys.argv) > 1 else "fixtures/sample_tweets.jsonl"
    lines = make_lines()
    with open(out, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"wrote {len(lines)} lines to {out}")


if __name__ == "__main__":
    main()
