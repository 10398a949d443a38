#!/usr/bin/env python3
"""Build the bundled two-language fixture archive under tests/fixtures/pmsite.

The fixture is designed so that the expected pipeline output is derivable
by hand, then double-checked here with the exhaustive alignment oracle
before anything is written:

  e01/h01  4 sentences, equal lengths         -> 4 diagonal 1-1 links
  e02/h02  intro + three "1." list items + outro -> 5 diagonal links
  e03/h03  en sentences 1+2 merge into hi 1   -> 3 one-to-one links
  e04/h04  extra long hi sentence at the end  -> 4 diagonal + target skip
  e05/h05  first two pairs duplicate e01/h01  -> 4 links, 2 duplicate pairs
  e06/h06  nav boilerplate + widget script    -> 3 diagonal links
  e07/h07  double danda, numbers              -> 3 diagonal links
  e08/h08  aligners disagree: length gives two 1-1s, the embedding side
           merges 2-1 and skips              -> 0 released pairs
  h09      dangling English link (e99)
  h10      English-served page (Latin title), filtered before fetch
  e09,e10  extra unpaired English articles

Length model: mean ratio 1.0 (every Hindi sentence is padded to the exact
character count of its English counterpart) with skip penalty 1.0: the
cheapest way to absorb an unpaired sentence into merges costs ~1.76, so a
designed skip always wins, while the designed diagonals/merges cost zero.
Embeddings are one-hot unit vectors assigned per designed gold alignment,
with embedding skip cost 0.5 for the same reason.

Expected release: length_dict 26 unique pairs, embedding 24, intersection
and released 24.

Rerun after changing extraction/splitting/alignment defaults; the script
asserts the design still holds and rewrites the fixture tree.
"""

from __future__ import annotations

import json
import shutil
import sys
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tests"))

from oracles import oracle_best_alignment  # noqa: E402

from bitextforge.align_embed import (  # noqa: E402
    EmbedAlignParams,
    EmbeddingMatrix,
    cost_normalizer,
    embed_cost,
    write_embeddings,
)
from bitextforge.align_length import LengthModel, link_cost  # noqa: E402
from bitextforge.dp import DEFAULT_SHAPES  # noqa: E402
from bitextforge.extraction import extract_paragraphs, strip_tweets  # noqa: E402
from bitextforge.ingestion import ArticleRef, is_translated  # noqa: E402
from bitextforge.splitter import default_config, segment_paragraphs  # noqa: E402

OUT = ROOT / "tests" / "fixtures" / "pmsite"
DIM = 16
EMBED_PARAMS = EmbedAlignParams(max_block=2, skip_cost=0.5, window=40, norm_samples=128, seed=1234)
LENGTH_MODEL = LengthModel(mean_ratio=1.0, variance=6.8)
LENGTH_SKIP = 1.0

TWEET = (
    '<blockquote class="twitter-tweet"><p lang="en">Watch the launch event live!</p>'
    "&mdash; Press Cell</blockquote>"
)
WIDGET = '<script async src="https://platform.twitter.com/widgets.js" charset="utf-8"></script>'


def pad(body: str, target: int, filler: str) -> str:
    """Extend the final word with filler letters to an exact character count."""
    if len(body) > target:
        raise SystemExit(f"base sentence longer than target ({len(body)} > {target}): {body!r}")
    return body + filler * (target - len(body))


def sent(body: str, target: int, filler: str, terminator: str) -> str:
    return pad(body, target - len(terminator), filler) + terminator


def en_sent(body: str, target: int = 72) -> str:
    return sent(body, target, "x", ".")


def hi_sent(body: str, target: int = 72, terminator: str = "।") -> str:
    return sent(body, target, "य", terminator)


def one_hot(k: int) -> np.ndarray:
    row = np.zeros(DIM)
    row[k] = 1.0
    return row


# --- document designs -------------------------------------------------------

DOCS: dict[str, dict] = {}


def doc(doc_id, lang, title, sentences, rows, en_link=None, list_items=(), html_extras=()):
    DOCS[doc_id] = {
        "id": doc_id,
        "lang": lang,
        "title": title,
        "sentences": sentences,
        "rows": rows,
        "en_link": en_link,
        "list_items": list_items,  # indices rendered as "N." markers inside <li>
        "html_extras": set(html_extras),
    }


P1_EN = [
    en_sent("The new transport programme was announced in the capital today"),
    en_sent("Mr. Sharma outlined the first phase of the corridor work"),
    en_sent("Construction of the main line will begin within three months"),
    en_sent("Officials expect steady progress on every section this year"),
]
P1_HI = [
    hi_sent("नई परिवहन योजना की घोषणा आज राजधानी में की गई"),
    hi_sent("श्री शर्मा ने गलियारे के काम के पहले चरण की रूपरेखा बताई"),
    hi_sent("मुख्य लाइन का निर्माण तीन महीने के भीतर शुरू होगा"),
    hi_sent("अधिकारियों को इस वर्ष हर खंड पर स्थिर प्रगति की उम्मीद है"),
]
doc("e01", "en", "Transport plan", P1_EN, [0, 1, 2, 3], html_extras=["tweet"])
doc("h01", "hi", "परिवहन योजना", P1_HI, [0, 1, 2, 3], en_link="e01")

P2_EN = [
    en_sent("The district council approved several new measures this week"),
    pad("Repair of rural roads across the whole district", 52, "x"),
    pad("Construction of new primary school buildings", 52, "x"),
    pad("Expansion of the rural drinking water network", 52, "x"),
    en_sent("Work on all of the approved measures starts next quarter"),
]
P2_HI = [
    hi_sent("जिला परिषद ने इस सप्ताह कई नए उपायों को मंजूरी दी"),
    pad("पूरे जिले में ग्रामीण सड़कों की मरम्मत", 52, "य"),
    pad("नए प्राथमिक विद्यालय भवनों का निर्माण", 52, "य"),
    pad("ग्रामीण पेयजल नेटवर्क का विस्तार", 52, "य"),
    hi_sent("सभी स्वीकृत उपायों पर काम अगली तिमाही से शुरू होगा"),
]
doc("e02", "en", "Council measures", P2_EN, [0, 1, 2, 3, 4], list_items=(1, 2, 3))
doc("h02", "hi", "परिषद के उपाय", P2_HI, [0, 1, 2, 3, 4], en_link="e02", list_items=(1, 2, 3))

P3_EN = [
    en_sent("The public health mission reached a new milestone this year"),
    en_sent("Vaccination coverage rose sharply", target=44),
    en_sent("Rural clinics saw more visits", target=44),
    en_sent("The ministry praised the effort of the field workers there"),
    en_sent("A detailed annual report will be published later this month"),
]
P3_HI = [
    hi_sent("सार्वजनिक स्वास्थ्य मिशन इस वर्ष एक नए पड़ाव पर पहुंचा"),
    hi_sent("टीकाकरण कवरेज तेजी से बढ़ा और ग्रामीण क्लीनिकों में अधिक लोग आए", target=88),
    hi_sent("मंत्रालय ने वहां क्षेत्र कार्यकर्ताओं के प्रयास की सराहना की"),
    hi_sent("विस्तृत वार्षिक रिपोर्ट इस महीने के अंत में प्रकाशित होगी"),
]
doc("e03", "en", "Health milestone", P3_EN, [0, 1, 1, 2, 3])
doc("h03", "hi", "स्वास्थ्य पड़ाव", P3_HI, [0, 1, 2, 3], en_link="e03")

P4_EN = [
    en_sent("The solar park in the western region was connected to the grid"),
    en_sent("Its panels will supply power to about two hundred villages"),
    en_sent("Engineers finished the substation ahead of the revised plan"),
    en_sent("A second phase of the park is already under consideration"),
]
P4_HI = [
    hi_sent("पश्चिमी क्षेत्र का सौर पार्क ग्रिड से जोड़ दिया गया"),
    hi_sent("इसके पैनल लगभग दो सौ गांवों को बिजली देंगे"),
    hi_sent("इंजीनियरों ने सबस्टेशन संशोधित योजना से पहले पूरा किया"),
    hi_sent("पार्क के दूसरे चरण पर पहले से विचार चल रहा है"),
    hi_sent("यह सामग्री केवल सूचना के लिए है और विवरण संबंधित विभाग से सत्यापित किए जाने चाहिए", target=124),
]
doc("e04", "en", "Solar park live", P4_EN, [0, 1, 2, 3])
doc("h04", "hi", "सौर पार्क चालू", P4_HI, [0, 1, 2, 3, 9], en_link="e04")

P5_EN = [
    P1_EN[0],
    P1_EN[1],
    en_sent("The cultural festival will travel to six more cities soon"),
    en_sent("Local artists have been invited to join the main programme"),
]
P5_HI = [
    P1_HI[0],
    P1_HI[1],
    hi_sent("सांस्कृतिक उत्सव जल्द छह और शहरों की यात्रा करेगा"),
    hi_sent("स्थानीय कलाकारों को मुख्य कार्यक्रम से जुड़ने का न्योता मिला"),
]
doc("e05", "en", "Festival tour", P5_EN, [0, 1, 2, 3])
doc("h05", "hi", "उत्सव यात्रा", P5_HI, [0, 1, 2, 3], en_link="e05")

P6_EN = [
    en_sent("The national games opened with a ceremony in the stadium"),
    en_sent("Athletes from every state marched in the evening parade"),
    en_sent("The swimming finals are scheduled for the coming weekend"),
]
P6_HI = [
    hi_sent("राष्ट्रीय खेल स्टेडियम में एक समारोह के साथ शुरू हुए"),
    hi_sent("हर राज्य के खिलाड़ियों ने शाम की परेड में हिस्सा लिया"),
    hi_sent("तैराकी के फाइनल आने वाले सप्ताहांत के लिए तय हैं"),
]
doc("e06", "en", "Games open", P6_EN, [0, 1, 2], html_extras=["nav", "widget", "date"])
doc("h06", "hi", "राष्ट्रीय खेल Phase शुरू", P6_HI, [0, 1, 2], en_link="e06")

P7_EN = [
    en_sent("The trade delegation visited the northern region yesterday"),
    en_sent("Leaders discussed projects worth five hundred crore rupees"),
    en_sent("Both sides signed the final agreement before the dinner"),
]
P7_HI = [
    hi_sent("व्यापार प्रतिनिधिमंडल ने कल उत्तरी क्षेत्र का दौरा किया"),
    hi_sent("नेताओं ने पांच सौ करोड़ रुपये की परियोजनाओं पर चर्चा की"),
    hi_sent("दोनों पक्षों ने रात्रिभोज से पहले अंतिम समझौते पर हस्ताक्षर किए", terminator="॥"),
]
doc("e07", "en", "Trade visit", P7_EN, [0, 1, 2])
doc("h07", "hi", "व्यापार दौरा", P7_HI, [0, 1, 2], en_link="e07")

P8_EN = [
    en_sent("The festival began with a parade", target=50),
    en_sent("Artists from twelve states performed", target=50),
]
P8_HI = [
    hi_sent("त्योहार की शुरुआत परेड से हुई", target=50),
    hi_sent("मौसम विभाग ने बारिश की चेतावनी दी", target=50),
]
doc("e08", "en", "Parade report", P8_EN, [0, 0])
doc("h08", "hi", "परेड रिपोर्ट", P8_HI, [0, 5], en_link="e08")

P9_HI = [
    hi_sent("नदी सफाई अभियान का दूसरा चरण आज से शुरू हो गया"),
    hi_sent("हजारों स्वयंसेवकों ने घाटों पर सफाई में हिस्सा लिया"),
    hi_sent("अगले महीने और शहरों को अभियान से जोड़ा जाएगा"),
]
doc("h09", "hi", "नदी अभियान", P9_HI, [0, 1, 2], en_link="e99")

P10_HI = [
    hi_sent("यह पन्ना अनुवाद उपलब्ध न होने पर अंग्रेजी में दिखता है"),
]
doc("h10", "hi", "Cabinet approves policy", P10_HI, [0], en_link="e10")

P9_EN = [
    en_sent("The museum reopened after a two year restoration effort"),
    en_sent("Visitors can now see the full sculpture gallery again"),
]
P10_EN = [
    en_sent("The weather office issued a heat advisory for the plains"),
    en_sent("Farmers were asked to adjust the irrigation schedules"),
]
doc("e09", "en", "Museum reopens", P9_EN, [0, 1])
doc("e10", "en", "Heat advisory", P10_EN, [0, 1])

PAIRS = [("e01", "h01"), ("e02", "h02"), ("e03", "h03"), ("e04", "h04"),
         ("e05", "h05"), ("e06", "h06"), ("e07", "h07"), ("e08", "h08")]

# Expected 1-1 index links per pair: (length_dict set, embedding set).
EXPECTED_ONE_TO_ONE = {
    "h01": ({(i, i) for i in range(4)}, {(i, i) for i in range(4)}),
    "h02": ({(i, i) for i in range(5)}, {(i, i) for i in range(5)}),
    "h03": ({(0, 0), (3, 2), (4, 3)}, {(0, 0), (3, 2), (4, 3)}),
    "h04": ({(i, i) for i in range(4)}, {(i, i) for i in range(4)}),
    "h05": ({(i, i) for i in range(4)}, {(i, i) for i in range(4)}),
    "h06": ({(i, i) for i in range(3)}, {(i, i) for i in range(3)}),
    "h07": ({(i, i) for i in range(3)}, {(i, i) for i in range(3)}),
    "h08": ({(0, 0), (1, 1)}, set()),
}


# --- html rendering ---------------------------------------------------------

NAV = (
    "<nav><ul>"
    + "".join(f'<li><a href="/en/section{i}.html">Desk {i}</a></li>' for i in range(12))
    + "</ul></nav>"
)


def render_html(spec: dict) -> str:
    parts = [
        "<!doctype html>",
        '<html><head><meta charset="utf-8">',
        f"<title>{spec['title']}</title></head>",
        "<body>",
    ]
    if "nav" in spec["html_extras"]:
        parts.append(NAV)
    parts.append(f"<h1>{spec['title']}</h1>")
    if "date" in spec["html_extras"]:
        parts.append("<div>03 Jan 2019</div>")
    if spec["en_link"] and spec["en_link"] != "none":
        parts.append(
            f'<p><a hreflang="en" href="../en/{spec["en_link"]}.html">Read in English</a></p>'
        )
    sentences = spec["sentences"]
    items = spec["list_items"]
    i = 0
    while i < len(sentences):
        if i in items:
            parts.append("<ul>")
            marker = 1
            while i in items:
                parts.append(f"<li>{marker}. {sentences[i]}</li>")
                marker += 1
                i += 1
            parts.append("</ul>")
        else:
            # physical paragraphs hold up to two sentences to exercise splitting
            if i + 1 < len(sentences) and (i + 1) not in items:
                parts.append(f"<p>{sentences[i]} {sentences[i + 1]}</p>")
                i += 2
            else:
                parts.append(f"<p>{sentences[i]}</p>")
                i += 1
        if i == 2 and "tweet" in spec["html_extras"]:
            parts.append(TWEET)
    if "widget" in spec["html_extras"]:
        parts.append(WIDGET)
    parts.append("</body></html>")
    return "\n".join(parts)


# --- verification -----------------------------------------------------------


def verify_pipeline_view(spec: dict) -> list[str]:
    """Run the real extract+split path and require the designed sentences."""
    html = strip_tweets(render_html(spec))
    paragraphs = extract_paragraphs(html, spec["id"])
    sentences = segment_paragraphs(paragraphs, default_config(spec["lang"]))
    if sentences != list(spec["sentences"]):
        raise SystemExit(
            f"{spec['id']}: extraction/splitting drifted from the design\n"
            f"  designed: {spec['sentences']}\n  actual:   {sentences}"
        )
    return sentences


def one_to_one(links) -> set[tuple[int, int]]:
    return {(src[0], tgt[0]) for src, tgt in links if len(src) == 1 and len(tgt) == 1}


def verify_alignments(en_spec: dict, hi_spec: dict) -> None:
    src, tgt = en_spec["sentences"], hi_spec["sentences"]

    def length_cost_of(src_idx, tgt_idx):
        return link_cost(
            [src[i] for i in src_idx],
            [tgt[j] for j in tgt_idx],
            LENGTH_MODEL,
            skip_penalty=LENGTH_SKIP,
        )

    _, length_links = oracle_best_alignment(len(src), len(tgt), DEFAULT_SHAPES, length_cost_of)

    src_rows = np.array([one_hot(k) for k in en_spec["rows"]])
    tgt_rows = np.array([one_hot(k) for k in hi_spec["rows"]])
    z = cost_normalizer(EmbeddingMatrix(src_rows), EmbeddingMatrix(tgt_rows), EMBED_PARAMS)

    def embed_cost_of(src_idx, tgt_idx):
        if not src_idx or not tgt_idx:
            return EMBED_PARAMS.skip_cost * (len(src_idx) + len(tgt_idx))
        return embed_cost(src_rows[list(src_idx)], tgt_rows[list(tgt_idx)], z)

    _, embed_links = oracle_best_alignment(len(src), len(tgt), DEFAULT_SHAPES, embed_cost_of)

    expected_length, expected_embed = EXPECTED_ONE_TO_ONE[hi_spec["id"]]
    got_length = one_to_one([(l[0], l[1]) for l in length_links])
    got_embed = one_to_one([(l[0], l[1]) for l in embed_links])
    if got_length != expected_length:
        raise SystemExit(f"{hi_spec['id']}: length 1-1 links {got_length} != {expected_length}")
    if got_embed != expected_embed:
        raise SystemExit(f"{hi_spec['id']}: embed 1-1 links {got_embed} != {expected_embed}")


def main() -> None:
    for doc_id, spec in DOCS.items():
        if spec["lang"] != "hi":
            continue
        ref = ArticleRef(id=doc_id, lang="hi", url="", title=spec["title"])
        expected = doc_id != "h10"
        if is_translated(ref, "hi") != expected:
            raise SystemExit(f"{doc_id}: title filter disagrees with design: {spec['title']!r}")
    for doc_id, spec in DOCS.items():
        if doc_id == "h10":
            continue  # filtered before fetch; never extracted
        verify_pipeline_view(spec)
    for en_id, hi_id in PAIRS:
        verify_alignments(DOCS[en_id], DOCS[hi_id])

    # Hand-derived release arithmetic, restated from the designs above.
    length_pairs = []
    embed_pairs = []
    for en_id, hi_id in PAIRS:
        en_s, hi_s = DOCS[en_id]["sentences"], DOCS[hi_id]["sentences"]
        exp_len, exp_emb = EXPECTED_ONE_TO_ONE[hi_id]
        length_pairs += [(en_s[i], hi_s[j]) for i, j in sorted(exp_len)]
        embed_pairs += [(en_s[i], hi_s[j]) for i, j in sorted(exp_emb)]
    length_unique = len(dict.fromkeys(length_pairs))
    embed_unique = len(dict.fromkeys(embed_pairs))
    released = len(set(length_pairs) & set(embed_pairs))
    print(f"length_dict unique: {length_unique}")
    print(f"embedding unique:   {embed_unique}")
    print(f"released:           {released}")
    assert length_unique == 26 and embed_unique == 24 and released == 24

    if OUT.exists():
        shutil.rmtree(OUT)
    for lang, ids in (
        ("en", [f"e{i:02d}" for i in range(1, 11)]),
        ("hi", [f"h{i:02d}" for i in range(1, 11)]),
    ):
        listing_dir = OUT / "listing" / lang
        listing_dir.mkdir(parents=True)
        for page, chunk in enumerate((ids[:6], ids[6:]), start=1):
            records = [
                {
                    "id": doc_id,
                    "url": f"https://archive.example/{lang}/{doc_id}",
                    "title": DOCS[doc_id]["title"],
                }
                for doc_id in chunk
            ]
            (listing_dir / f"page-{page}.json").write_text(
                json.dumps(records, ensure_ascii=False, indent=1) + "\n", encoding="utf-8"
            )
        html_dir = OUT / "html" / lang
        html_dir.mkdir(parents=True)
        emb_dir = OUT / "embeddings" / lang
        emb_dir.mkdir(parents=True)
        for doc_id in ids:
            spec = DOCS[doc_id]
            if doc_id != "h10":  # the untranslated page is never served
                (html_dir / f"{doc_id}.html").write_text(render_html(spec), encoding="utf-8")
                rows = np.array([one_hot(k) for k in spec["rows"]])
                write_embeddings(rows, emb_dir / f"{doc_id}.emb")
    print(f"fixture written to {OUT}")


if __name__ == "__main__":
    main()
