"""Regenerate the default verb frame table from the verb lexicon.

Each verb in data/verbs.tsv declares the subject and object types it
admits; the frame table is the full 16-cell grid per verb with keep
wherever both slots are admitted and prune elsewhere.  Run from the
repository root:

    python tools/make_default_frames.py
"""

from pathlib import Path

TYPES = ["Person", "Object", "Location", "Concept"]
DATA = Path(__file__).resolve().parent.parent / "src" / "autoquery" / "data"


def main() -> None:
    rows = []
    for line in (DATA / "verbs.tsv").read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        lemma, _past, subj_csv, obj_csv = line.split("\t")
        subj = set(subj_csv.split(","))
        obj = set(obj_csv.split(","))
        for s in TYPES:
            for o in TYPES:
                decision = "keep" if (s in subj and o in obj) else "prune"
                rows.append(f"{lemma}\t{s}\t{o}\t{decision}")
    header = (
        "# format: verb_frames v1\n"
        "# Verb frame table for Why/How object-pair questions.\n"
        "# verb<TAB>subject_type<TAB>object_type<TAB>keep|prune\n"
        "# 16 rows per verb.  Generated by tools/make_default_frames.py;\n"
        "# edit verbs.tsv and regenerate, or edit rows here directly.\n"
    )
    out = DATA / "verb_frames.tsv"
    out.write_text(header + "\n".join(rows) + "\n")
    print(f"wrote {out} ({len(rows)} rows)")


if __name__ == "__main__":
    main()
