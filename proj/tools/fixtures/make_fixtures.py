#!/usr/bin/env python3
# Copyright 2026 The Dogwhistle Pipeline Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates the files under fixtures/. Output is deterministic."""

import csv
import json
import pathlib
import random

ROOT = pathlib.Path(__file__).resolve().parents[2] / "fixtures"
HEADER = {"schema": "dogwhistle-glossary", "version": 1}


def dump(obj):
    return json.dumps(obj, sort_keys=True, ensure_ascii=False)


def write_jsonl(path, records):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for r in records:
            f.write(dump(r) + "\n")


def entry(id_, term, forms, meaning, in_group, sphere):
    return {"id": id_, "term": term, "surface_forms": forms,
            "coded_meaning": meaning, "in_group": in_group, "sphere": sphere}


SMALL_GLOSSARY = [
    entry("welfare_queen", "welfare queen", ["welfare queen", "welfare queens"],
          "Black women portrayed as defrauding public assistance", "racist", "formal"),
    entry("inner_city", "inner city", ["inner city", "inner-city", "inner cities"],
          "Black and minority urban neighborhoods", "racist", "formal"),
    entry("states_rights", "states' rights", ["states' rights", "states rights"],
          "opposition to federally enforced civil rights", "racist", "formal"),
    entry("law_and_order", "law and order", ["law and order"],
          "harsh policing aimed at Black communities", "racist", "formal"),
    entry("fatherless", "fatherless", ["fatherless"],
          "Black families framed as broken", "racist", "formal"),
    entry("federal_reserve", "federal reserve", ["federal reserve"],
          "Jewish control of finance", "antisemitic", "formal"),
    entry("thug", "thug", ["thug", "thugs"],
          "Black men cast as inherently criminal", "racist", "both"),
    entry("globalist", "globalist", ["globalist", "globalists"],
          "Jewish people as disloyal elites", "antisemitic", "both"),
    entry("terrorist", "terrorist", ["terrorist", "terrorists"],
          "Muslim people as a collective threat", "Islamophobic", "both"),
    entry("xx", "XX", ["XX"],
          "transgender women are not women", "transphobic", "informal"),
    entry("based", "based", ["based"],
          "approval of reactionary or bigoted views", "anti-liberal", "informal"),
    entry("single", "single", ["single"],
          "unmarried mothers blamed for social decline", "misogynist", "formal"),
    entry("soy_boy", "soy boy", ["soy boy", "soy boys", "soyboy", "soy"],
          "liberal men cast as weak and effeminate", "anti-liberal", "informal"),
    entry("groomer", "groomer", ["groomer", "groomers"],
          "LGBTQ+ people cast as predators of children", "transphobic", "informal"),
    entry("jogger", "jogger", ["jogger", "joggers"],
          "mocking reference to a Black murder victim", "racist", "informal"),
    entry("pureblood", "pureblood", ["pureblood", "purebloods", "pure blood"],
          "unvaccinated people as superior", "anti-vax", "informal"),
]

FORMAL_INGROUPS = [("racist", 80), ("antisemitic", 30), ("anti-Latino", 20),
                   ("Islamophobic", 15), ("homophobic", 15), ("transphobic", 10),
                   ("anti-liberal", 10), ("misogynist", 8), ("white supremacist", 5)]
INFORMAL_INGROUPS = [("racist", 40), ("transphobic", 25), ("antisemitic", 20),
                     ("white supremacist", 20), ("anti-vax", 12), ("homophobic", 10),
                     ("anti-liberal", 10), ("Islamophobic", 5), ("misogynist", 5)]


def full_glossary():
    rng = random.Random(340)
    syllables = ["ka", "lo", "mi", "ra", "tu", "ve", "zo", "ne", "pi", "sa",
                 "du", "fe", "gi", "ho", "ju", "bo"]
    seen = set()

    def word():
        while True:
            w = "".join(rng.choice(syllables) for _ in range(3))
            if w not in seen:
                seen.add(w)
                return w

    out = []
    plan = [("formal", g, c) for g, c in FORMAL_INGROUPS]
    plan += [("informal", g, c) for g, c in INFORMAL_INGROUPS]
    i = 0
    for sphere, group, count in plan:
        for _ in range(count):
            a, b = word(), word()
            term = f"{a} {b}"
            forms = [term, f"{term}s", f"{a}-{b}", f"{a}{b}"]
            out.append(entry(f"dw{i:03d}", term, forms,
                             f"synthetic coded meaning {i}", group, sphere))
            i += 1
    return out


FORMAL_DOCS = [
    ("cr-1900-06-01-a", "1900-06-01", "Mr. Grant", "House", "R",
     "The gentleman from Ohio spoke of law and order on the frontier. I yield back."),
    ("cr-1965-05-10-a", "1965-05-10", "Mr. Tolliver", "Senate", "D",
     "We must defend states' rights against the overreach of Washington. "
     "The federal reserve should not dictate policy to our counties."),
    ("cr-1980-01-15-a", "1980-01-15", "Mrs. Alden", "House", "R",
     "The committee will review the Federal Reserve report. No further business."),
    ("cr-1990-04-04-a", "1990-04-04", "Mr. Hale", "House", "R",
     "Globalist bankers in distant capitals do not care about Main Street. "
     "They never have."),
    ("cr-1996-03-12-a", "1996-03-12", "Mr. Pruitt", "House", "R",
     "Mr. Speaker, we cannot keep rewarding welfare queens who game the system. "
     "The American taxpayer deserves law and order in our streets."),
    ("cr-1996-07-30-a", "1996-07-30", "Ms. Ortega", "House", "D",
     "The inner-city schools in my district need federal funds. "
     "These are hardworking families who ask for very little."),
    ("cr-2001-10-03-a", "2001-10-03", "Mr. Lind", "Senate", "D",
     "The terrorists who attacked us must be brought to justice. We will not rest."),
    ("cr-2016-09-14-a", "2016-09-14", "Mr. Barlow", "House", "R",
     "Too many fatherless homes leave children without guidance. "
     "The inner cities deserve better than this."),
    ("cr-2017-12-19-a", "2017-12-19", "Mrs. Kemp", "Senate", "R",
     "This bill helps single parents and working families keep more of their pay."),
    ("cr-2020-06-25-a", "2020-06-25", "Mr. Doyle", "House", "R",
     "Our cities need law and order, not anarchy. "
     "Thugs burned small businesses to the ground."),
]

INFORMAL_DOCS = [
    ("rd-1999-09-09-a", "1999-09-09", "hiking",
     "Based on the forecast we'll hike tomorrow morning."),
    ("rd-2014-01-01-a", "2014-01-01", "dating", "Still single, still thriving."),
    ("rd-2015-06-26-a", "2015-06-26", "news", "The groomers won today. Kids are next."),
    ("rd-2016-05-10-a", "2016-05-10", "politics",
     "lol this soy boy thinks he can debate. Get a real job."),
    ("rd-2016-11-09-a", "2016-11-09", "politics",
     "XX chromosomes don't lie, sorry not sorry."),
    ("rd-2017-03-03-a", "2017-03-03", "vaccines",
     "Pure blood and proud, my kids will stay that way."),
    ("rd-2018-01-20-a", "2018-01-20", "genealogy",
     "My grandmother was single her whole life and ran a farm."),
    ("rd-2019-11-11-a", "2019-11-11", "running",
     "Saw another jogger on the trail at 5am and we waved at each other."),
    ("rd-2020-02-02-a", "2020-02-02", "memes", "That take is based. Absolutely based."),
    ("rd-2020-05-10-a", "2020-05-10", "news",
     "Another jogger story on the news, you know what kind of neighborhood that is."),
    ("rd-2021-08-01-a", "2021-08-01", "conspiracy",
     "Proud pureblood here. Never taking the jab."),
    ("rd-2021-12-01-a", "2021-12-01", "finance",
     "The globalists at Davos want you to own nothing."),
    ("rd-2022-03-15-a", "2022-03-15", "cooking",
     "I switched to soy milk in my latte and honestly it's great."),
    ("rd-2023-09-07-a", "2023-09-07", "movies",
     "They rebooted my favorite cartoon and made it woke. The terrorists have won again."),
]

SCRIPT = [
    {"default_label": "not_coded"},
    {"sentence": "welfare queens who game", "labels": ["coded"],
     "explanation": "invokes the racialized welfare fraud trope"},
    {"sentence": "law and order in our streets", "labels": ["coded"]},
    {"sentence": "law and order, not anarchy", "labels": ["coded"]},
    {"sentence": "states' rights against", "labels": ["coded"]},
    {"sentence": "fatherless homes", "labels": ["coded"]},
    {"sentence": "Thugs burned", "labels": ["coded"]},
    {"sentence": "Globalist bankers", "labels": ["coded"]},
    {"sentence": "soy boy thinks", "labels": ["coded"]},
    {"sentence": "pureblood here", "labels": ["coded"]},
    {"sentence": "Pure blood and proud", "labels": ["coded"]},
    {"sentence": "groomers won", "labels": ["coded"]},
    {"sentence": "kind of neighborhood", "labels": ["coded", "coded", "not_coded"]},
    {"sentence": "made it woke", "labels": ["coded"]},
    {"sentence": "Davos", "labels": ["coded"]},
    {"sentence": "Absolutely based", "labels": ["coded", "not_coded", "coded"]},
    {"refuse": "chromosomes", "kind": "blocked", "runs": [1]},
]


def corpus_records():
    formal = [{"doc_id": d, "kind": "formal", "date": date, "speaker": sp,
               "chamber": ch, "party": pa, "text": text}
              for d, date, sp, ch, pa, text in FORMAL_DOCS]
    informal = [{"doc_id": d, "kind": "informal", "date": date, "community": c,
                 "text": text}
                for d, date, c, text in INFORMAL_DOCS]
    return formal, informal


# Detection gold plus stored responses: 50 positives (45 detected, 5
# missed) and 50 negatives (40 rejected, 10 false alarms).
def detection_fixture():
    positives = [
        ("welfare_queen", "They talk about welfare queens every election cycle.", "welfare queens"),
        ("inner_city", "Crime in the inner city is out of control again.", "inner city"),
        ("thug", "Those thugs should be locked up for good.", "thugs"),
        ("globalist", "The globalists want open borders and cheap labor.", "globalists"),
        ("groomer", "Teachers like that are groomers, plain and simple.", "groomers"),
    ]
    negatives = [
        "The committee adjourned at noon after a short debate.",
        "We planted tomatoes in the garden this weekend.",
        "The bridge repair will finish next spring.",
        "Our team won the regional championship.",
        "The library extended its weekend hours.",
    ]
    glossary = {e["id"]: e for e in SMALL_GLOSSARY}
    gold, responses = [], []
    for i in range(50):
        eid, text, span = positives[i % len(positives)]
        wrong = [e for e in SMALL_GLOSSARY if e["id"] != eid][i % 6: i % 6 + 5]
        options = [{"term": glossary[eid]["term"], "definition": glossary[eid]["coded_meaning"]}]
        options += [{"term": w["term"], "definition": w["coded_meaning"]} for w in wrong]
        options.append({"term": "none", "definition": "no dog whistle present"})
        gold.append({"text": text, "has_dw": True, "gold_entry_id": eid,
                     "choice_set": options, "correct_choice": 0})
        if i < 45:
            if i < 30:
                raw = (f'Yes. The dog whistle is "{span}", which refers to '
                       f'{glossary[eid]["coded_meaning"]}.')
            else:
                raw = 'Yes. The dog whistle is "election", which means a vote.'
            responses.append({"raw": raw, "status": "ok", "choice": 0 if i < 20 else 3})
        else:
            responses.append({"raw": "No. This sentence does not contain a dog whistle.",
                              "status": "ok"})
    for i in range(50):
        gold.append({"text": negatives[i % len(negatives)], "has_dw": False})
        if i < 40:
            responses.append({"raw": "No, there is no dog whistle here.", "status": "ok"})
        else:
            responses.append({"raw": 'Yes. The dog whistle is "debate", meaning partisan conflict.',
                              "status": "ok"})
    return gold, responses


DISAMBIGUATION_GOLD = [
    {"entry_id": "soy_boy", "sentences": [
        "Typical soy boy, crying about every joke.",
        "I add soy sauce to almost everything.",
        "The soy harvest was late this year.",
        "Look at these soy boys lining up for the new phone.",
        "Soy milk prices went up again."],
     "labels": ["coded", "not_coded", "not_coded", "coded", "not_coded"]},
    {"entry_id": "jogger", "sentences": [
        "The jogger waved as she passed the bakery.",
        "Another jogger incident, we all know what that means.",
        "Joggers should wear reflective vests at night.",
        "He was just a jogger, sure, keep telling yourself that."],
     "labels": ["not_coded", "coded", "not_coded", "coded"]},
    {"entry_id": "inner_city", "sentences": [
        "Inner city thugs are ruining this country.",
        "The inner city library opened a new reading room.",
        "Rents in the inner city rose five percent.",
        "We all know who lives in the inner city and why it's dangerous.",
        "Inner-city bus routes will change next month.",
        "Those inner cities breed nothing but crime."],
     "labels": ["coded", "not_coded", "not_coded", "coded", "not_coded", "coded"]},
]

EVENTS = [(1996, "PRWORA"), (2015, "Obergefell v. Hodges"), (2016, "Bathroom bills"),
          (2017, "Transgender military ban"), (2021, "COVID vaccine availability")]


def main():
    write_jsonl(ROOT / "glossary.jsonl", [HEADER] + SMALL_GLOSSARY)
    write_jsonl(ROOT / "glossary_full.jsonl", [HEADER] + full_glossary())
    formal, informal = corpus_records()
    write_jsonl(ROOT / "corpus" / "formal.jsonl", formal)
    write_jsonl(ROOT / "corpus" / "informal.jsonl", informal)
    write_jsonl(ROOT / "mock" / "disambiguation_script.jsonl", SCRIPT)
    gold, responses = detection_fixture()
    write_jsonl(ROOT / "eval" / "detection_gold.jsonl", gold)
    write_jsonl(ROOT / "eval" / "detection_responses.jsonl", responses)
    write_jsonl(ROOT / "eval" / "disambiguation_gold.jsonl", DISAMBIGUATION_GOLD)

    with open(ROOT / "events.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\r\n")
        w.writerow(["year", "label"])
        w.writerows(EVENTS)

    labels = (["coded_match"] * 341 + ["coded_novel_sense"] * 17 + ["not_coded"] * 42)
    with open(ROOT / "eval" / "validation_labels.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\r\n")
        w.writerow(["record_id", "judgment", "note"])
        for i, judgment in enumerate(labels):
            w.writerow([f"r{i:04d}", judgment, ""])

    (ROOT / "mock").mkdir(exist_ok=True)
    with open(ROOT / "mock" / "provider.json", "w") as f:
        f.write(json.dumps({"name": "mock-scripted", "kind": "mock-scripted",
                            "script": "disambiguation_script.jsonl",
                            "max_inflight": 4}, indent=2) + "\n")
    with open(ROOT / "mock" / "stochastic.json", "w") as f:
        f.write(json.dumps({"name": "mock-stochastic", "kind": "mock-stochastic",
                            "flip_probability": 0.2, "seed": 11,
                            "max_inflight": 4}, indent=2) + "\n")
    with open(ROOT / "run.json", "w") as f:
        f.write(json.dumps({
            "glossary": "glossary.jsonl",
            "corpora": [{"path": "corpus/formal.jsonl", "kind": "formal"},
                        {"path": "corpus/informal.jsonl", "kind": "informal"}],
            "sampling_policy": "../config/sampling_policy.json",
            "provider": "mock/provider.json",
            "n": 3,
            "seed": 7,
            "output_dir": "../build/fixture-run",
            "workers": 1}, indent=2) + "\n")


if __name__ == "__main__":
    main()
