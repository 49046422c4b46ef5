#!/usr/bin/env python3
"""Regenerate the bundled fixtures and sample corpora.

Each sample document is written down as source chunks plus the machine
translation as a list of English pieces, each naming the source chunk(s) it
aligns with.  This script turns that into texts, alignment strings (Chinese)
or tagged-HTML responses (Arabic), gold annotations, and the hand-counted
expected TP/FP/FN per document.

The expected counts below were worked out by hand from the gazetteer, the
tagger rules and the repair rules, before running the pipeline on the
corpus.  They are data, not computed here.

    python tools/build_samples.py
"""

from __future__ import annotations

import json
from pathlib import Path

DATA = Path(__file__).resolve().parents[1] / "src" / "mtgeoparse" / "data"
PUNCT = {".", ",", "?", "!", ";", ":"}

HTML_HEAD = '<html lang="en-x-mtfrom-{lang}"><head></head><body><doctype html=""><title></title>'
HTML_TAIL = "</doctype></body></html>"


def jsonl(path: Path, records):
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for r in records:
            fh.write(json.dumps(r, ensure_ascii=False) + "\n")


def assemble(pieces):
    """Join English pieces; return text and each piece's inclusive range."""
    text, ranges = "", []
    for piece, _ in pieces:
        if text and piece not in PUNCT:
            text += " "
        start = len(text)
        text += piece
        ranges.append((start, len(text) - 1))
    return text, ranges


def chunk_ranges(chunks, sep):
    out, pos = [], 0
    for c in chunks:
        out.append((pos, pos + len(c) - 1))
        pos += len(c) + len(sep)
    return out


def links_of(piece_links):
    if piece_links is None:
        return ()
    return piece_links if isinstance(piece_links, tuple) else (piece_links,)


def alignment_string(chunks, pieces, sep=""):
    src = chunk_ranges(chunks, sep)
    _, tgt = assemble(pieces)
    links = []
    for (_, refs), (c, d) in zip(pieces, tgt):
        for ref in links_of(refs):
            a, b = src[ref]
            links.append(f"{a}:{b}-{c}:{d}")
    return " ".join(links)


def tagged_html(pieces, lang):
    body = ""
    for piece, ref in pieces:
        if body and piece not in PUNCT:
            body += " "
        body += piece if ref is None else f'<span data-idx="{ref}">{piece}</span>'
    return HTML_HEAD.format(lang=lang) + body + HTML_TAIL


def gold_rows(doc_id, text, surfaces, lang):
    rows, seen = [], {}
    for s in surfaces:
        start = -1
        for _ in range(seen.get(s, 0) + 1):
            start = text.index(s, start + 1)
        seen[s] = seen.get(s, 0) + 1
        rows.append(f"{doc_id}\t{start}\t{start + len(s) - 1}\t{s}\t{lang}")
    return rows or [doc_id]


# --- worked examples --------------------------------------------------------

WORKED_ZH_SOURCE = "美国在加勒比海和太平洋还拥有多处领土和岛屿地区"
WORKED_ZH_TRANSLATION = (
    "United States in the Caribbean and the Pacific, also has a number of "
    "territories and insular areas"
)
WORKED_ZH_ALIGNMENT = (
    "0:1-0:5 0:1-7:12 2:2-14:15 3:5-21:30 6:6-21:30 7:7-31:33 8:10-39:45 "
    "11:11-48:51 12:13-53:55 14:14-59:64 16:17-69:79 18:18-81:83 19:20-85:91 21:22-93:97"
)
ISRAEL_TOKENS = ["أنا", "أعيش", "في", "إسرائيل"]
ISRAEL_PIECES = [("I", 0), ("live", 1), ("in", 2), ("Israel", 3)]


def worked_examples():
    records = [
        {
            "source_lang": "zh",
            "source_text": WORKED_ZH_SOURCE,
            "translation": WORKED_ZH_TRANSLATION,
            "alignment_string": WORKED_ZH_ALIGNMENT,
        },
        {
            "source_lang": "ar",
            "source_text": " ".join(ISRAEL_TOKENS),
            "translated_html": tagged_html(ISRAEL_PIECES, "ar"),
        },
    ]
    # bundled preposition: Крыма aligned with "of Crimea"
    ru_chunks = ["Жители", "Крыма", "голосовали"]
    ru_pieces = [("Residents", 0), ("of Crimea", 1), ("voted", 2)]
    records.append(rec("ru", ru_chunks, ru_pieces, " "))
    # two source phrases for one English word
    records.append(rec("zh", *ZH_DOCS["zh02"][:2]))
    # phrase only aligned word by word
    records.append(rec("zh", *ZH_DOCS["zh03"][:2]))
    # repeated word, second occurrence unaligned
    ar02 = AR_DOCS["ar02"]
    records.append(
        {
            "source_lang": "ar",
            "source_text": " ".join(ar02[0]),
            "translated_html": tagged_html(ar02[1], "ar"),
        }
    )
    # no alignment at all
    records.append(rec("zh", *ZH_DOCS["zh19"][:2]))
    return records


def rec(lang, chunks, pieces, sep=""):
    text, _ = assemble(pieces)
    return {
        "source_lang": lang,
        "source_text": sep.join(chunks),
        "translation": text,
        "alignment_string": alignment_string(chunks, pieces, sep),
    }


# --- Chinese sample corpus ----------------------------------------------------
# doc_id: (source chunks, MT pieces, manual translation, gold source surfaces,
#          gold English surfaces (in the manual translation),
#          hand counts {side/run: (TP, FP, FN)})

ZH_DOCS = {
    "zh02": (
        ["塞尔维亚共和国", "总统", "说", "，", "塞尔维亚", "不会", "承认", "科索沃", "独立", "。"],
        [("The President", 1), ("of Serbia", 0), ("said", 2), ("that", None), ("Serbia", 4),
         ("will not", 5), ("recognize", 6), ("Kosovo", 7), ("independence", 8), (".", None)],
        "The President of the Republic of Serbia said that Serbia would not recognize the independence of Kosovo.",
        ["塞尔维亚共和国", "塞尔维亚", "科索沃"],
        ["Serbia", "Serbia", "Kosovo"],
        # both Serbia occurrences project to the longer map value
        {"src": (2, 1, 1), "mt_en": (3, 0, 0), "man_en": (3, 0, 0)},
    ),
    "zh03": (
        ["大", "不列颠", "是", "一个", "岛屿", "。"],
        [("Great", 0), ("Britain", 1), ("is", 2), ("an", 3), ("island", 4), (".", None)],
        "Great Britain is an island.",
        ["大不列颠"],
        ["Great Britain"],
        {"src": (1, 0, 0), "mt_en": (1, 0, 0), "man_en": (1, 0, 0)},
    ),
    "zh04": (
        ["乔丹", "在", "芝加哥", "打", "篮球", "。"],
        [("Jordan", 0), ("plays", 3), ("basketball", 4), ("in", 1), ("Chicago", 2), (".", None)],
        "Jordan played basketball in Chicago.",
        ["芝加哥"],
        ["Chicago"],
        # Jordan the player is tagged as the country
        {"src": (1, 1, 0), "mt_en": (1, 1, 0), "man_en": (1, 1, 0)},
    ),
    "zh05": (
        ["黄河", "流经", "兰州", "。"],
        [("yellow river", 0), ("flows through", 1), ("Lanzhou", 2), (".", None)],
        "The Yellow River flows through Lanzhou.",
        ["黄河", "兰州"],
        ["Yellow River", "Lanzhou"],
        # lower-cased in the machine translation, so not tagged
        {"src": (1, 0, 1), "mt_en": (1, 0, 1), "man_en": (2, 0, 0)},
    ),
    "zh06": (
        ["周庄", "是", "江苏", "的", "一个", "古镇", "。"],
        [("Zhouzhuang", 0), ("is", 1), ("an", 4), ("ancient town", 5), ("in", None),
         ("Jiangsu", 2), (".", None)],
        "Zhouzhuang is an ancient town in Jiangsu.",
        ["周庄", "江苏"],
        ["Zhouzhuang", "Jiangsu"],
        # Zhouzhuang is not in the gazetteer
        {"src": (1, 0, 1), "mt_en": (1, 0, 1), "man_en": (1, 0, 1)},
    ),
    "zh07": (
        ["代表团", "从", "北京", "飞往", "莫斯科", "。"],
        [("The delegation", 0), ("flew", 3), ("from", 1), ("Beijing", 2), ("to", None),
         ("Moscow", None), (".", None)],
        "The delegation flew from Beijing to Moscow.",
        ["北京", "莫斯科"],
        ["Beijing", "Moscow"],
        # Moscow has no link and no repeat to recover from: unresolved
        {"src": (1, 0, 1), "mt_en": (2, 0, 0), "man_en": (2, 0, 0)},
    ),
    "zh08": (
        ["以色列", "说", "，", "以色列", "不会", "让步", "。"],
        [("Israel", 0), ("said", 1), ("that", None), ("Israel", None), ("would not", 4),
         ("make concessions", 5), (".", None)],
        "Israel said that Israel would not make concessions.",
        ["以色列", "以色列"],
        ["Israel", "Israel"],
        # second Israel recovered from the repeated source word
        {"src": (2, 0, 0), "mt_en": (2, 0, 0), "man_en": (2, 0, 0)},
    ),
    "zh09": (
        ["他", "说", "今天", "天气", "很好", "。"],
        [("He", 0), ("said", 1), ("the weather", 3), ("is very good", 4), ("today", 2), (".", None)],
        "He said the weather is very good today.",
        [],
        [],
        {"src": (0, 0, 0), "mt_en": (0, 0, 0), "man_en": (0, 0, 0)},
    ),
    "zh10": (
        ["纽约", "是", "美国", "最大的", "城市", "。"],
        [("New York", 0), ("is", 1), ("the largest", 3), ("city", 4), ("in", None),
         ("the United States", 2), (".", None)],
        "New York is the largest city in the United States.",
        ["纽约", "美国"],
        ["New York", "United States"],
        {"src": (2, 0, 0), "mt_en": (2, 0, 0), "man_en": (2, 0, 0)},
    ),
    "zh11": (
        ["缅甸", "与", "泰国", "接壤", "。"],
        [("Myanmar", 0), ("borders", 3), ("Thailand", 2), (".", None)],
        "Burma borders Thailand.",
        ["缅甸", "泰国"],
        ["Burma", "Thailand"],
        # machine says Myanmar, the annotation says Burma
        {"src": (2, 0, 0), "mt_en": (1, 1, 1), "man_en": (2, 0, 0)},
    ),
    "zh12": (
        ["他们", "乘船", "穿过", "地中", "海", "到达", "希腊", "。"],
        [("They", 0), ("crossed", 2), ("the Mediterranean", (3, 4)), ("by boat", 1),
         ("to reach", 5), ("Greece", 6), (".", None)],
        "They crossed the Mediterranean by boat to Greece.",
        ["地中海", "希腊"],
        ["Mediterranean", "Greece"],
        # adjacent pieces 地中 + 海 merged under one key
        {"src": (2, 0, 0), "mt_en": (2, 0, 0), "man_en": (2, 0, 0)},
    ),
    "zh13": (
        ["墨西哥", "湾", "发生了", "石油", "泄漏", "。"],
        [("An oil", 3), ("spill", 4), ("occurred", 2), ("in", None), ("the Gulf", 1),
         ("of Mexico", 0), (".", None)],
        "An oil spill occurred in the Gulf of Mexico.",
        ["墨西哥湾"],
        ["Gulf of Mexico"],
        # token path, reversed order in the source: non-contiguous but covering
        {"src": (1, 0, 0), "mt_en": (1, 0, 0), "man_en": (1, 0, 0)},
    ),
    "zh14": (
        ["她", "去年", "搬到了", "巴黎", "。"],
        [("She", 0), ("moved to", 2), ("Paris", 3), ("last year", 1), (".", None)],
        "She moved to Paris last year.",
        ["巴黎"],
        ["Paris"],
        {"src": (1, 0, 0), "mt_en": (1, 0, 0), "man_en": (1, 0, 0)},
    ),
    "zh15": (
        ["利比亚", "首都", "的黎波里", "发生", "冲突", "。"],
        [("Clashes", 4), ("broke out", 3), ("in the Libyan", 0), ("capital", 1),
         ("Tripoli", 2), (".", None)],
        "Clashes broke out in Tripoli, the capital of Libya.",
        ["利比亚", "的黎波里"],
        ["Tripoli", "Libya"],
        # "Libyan" is not a gazetteer name
        {"src": (1, 0, 1), "mt_en": (1, 0, 1), "man_en": (2, 0, 0)},
    ),
    "zh16": (
        ["俄罗斯", "吞并了", "乌克兰", "的", "克里米亚", "。"],
        [("Russia", 0), ("annexed", 1), ("the Crimea", 4), ("of Ukraine", 2), (".", None)],
        "Russia annexed Ukraine's Crimea.",
        ["俄罗斯", "乌克兰", "克里米亚"],
        ["Russia", "Ukraine", "Crimea"],
        # possessive "Ukraine's" is one token and misses the gazetteer
        {"src": (3, 0, 0), "mt_en": (3, 0, 0), "man_en": (2, 0, 1)},
    ),
    "zh17": (
        ["约旦", "首都", "安曼", "举行了", "会议", "。"],
        [("The meeting", 4), ("was held", 3), ("in", None), ("Amman", 2), (",", None),
         ("capital", 1), ("of Jordan", 0), (".", None)],
        "The meeting was held in the Jordanian capital, Amman.",
        ["约旦", "安曼"],
        ["Jordanian", "Amman"],
        # the annotation marks the adjective; neither translation tags it
        {"src": (2, 0, 0), "mt_en": (1, 1, 1), "man_en": (1, 0, 1)},
    ),
    "zh18": (
        ["他", "在", "武汉", "大学", "学习", "，", "后来", "去了", "匹兹堡", "。"],
        [("He", 0), ("studied", 4), ("at", 1), ("Wuhan", 2), ("University", 3),
         ("and later", 6), ("went to", 7), ("Pittsburgh", 8), (".", None)],
        "He studied at Wuhan University and later went to Pittsburgh.",
        ["武汉", "匹兹堡"],
        ["Wuhan", "Pittsburgh"],
        {"src": (2, 0, 0), "mt_en": (2, 0, 0), "man_en": (2, 0, 0)},
    ),
    "zh19": (
        ["台风", "袭击了", "菲律宾", "。"],
        [("A typhoon", None), ("hit", None), ("the Philippines", None), (".", None)],
        "The typhoon struck the Philippines.",
        ["菲律宾"],
        ["Philippines"],
        # provider returned no alignment at all
        {"src": (0, 0, 1), "mt_en": (1, 0, 0), "man_en": (1, 0, 0)},
    ),
    "zh20": (
        ["悉尼", "是", "澳大利亚", "人口最多的", "城市", "。"],
        [("Sydney", 0), ("is", 1), ("the most populous", 3), ("city", 4),
         ("in Australia", 2), (".", None)],
        "Sydney is Australia's most populous city.",
        ["悉尼", "澳大利亚"],
        ["Sydney", "Australia"],
        {"src": (2, 0, 0), "mt_en": (2, 0, 0), "man_en": (1, 0, 1)},
    ),
    "zh21": (
        ["越南", "和", "中国", "在", "南", "海", "问题上", "存在", "争议", "。"],
        [("Vietnam", 0), ("and", 1), ("China", 2), ("have", 7), ("disputes", 8), ("over", 3),
         ("the South", 4), ("China", None), ("Sea", 5), ("issue", 6), (".", None)],
        "Vietnam and China have a dispute over the South China Sea.",
        ["越南", "中国", "南海"],
        ["Vietnam", "China", "South China Sea"],
        # "South China Sea" recombines 南 + 中国 + 海; the cover 中国在南海 is wrong
        {"src": (2, 1, 1), "mt_en": (3, 0, 0), "man_en": (3, 0, 0)},
    ),
    "zh22": (
        ["拉萨", "是", "西藏", "的", "首府", "。"],
        [("Lhasa", 0), ("is", 1), ("the capital", 4), ("of Tibet", 2), (".", None)],
        "Lhasa is the capital of Tibet.",
        ["拉萨", "西藏"],
        ["Lhasa", "Tibet"],
        {"src": (2, 0, 0), "mt_en": (2, 0, 0), "man_en": (2, 0, 0)},
    ),
}

ZH01 = {
    "manual": "The United States also has many territories and island areas in the Caribbean and the Pacific.",
    "gold_src": ["美国", "加勒比海", "太平洋"],
    "gold_en": ["United States", "Caribbean", "Pacific"],
    "expect": {"src": (3, 0, 0), "mt_en": (3, 0, 0), "man_en": (3, 0, 0)},
}


# --- Arabic sample corpus -----------------------------------------------------
# Same layout; source chunks are whitespace tokens and the machine
# translation is a tagged-HTML response.

AR_DOCS = {
    "ar01": (
        ISRAEL_TOKENS,
        ISRAEL_PIECES + [(".", None)],
        "I live in Israel.",
        ["إسرائيل"],
        ["Israel"],
        {"src": (1, 0, 0), "mt_en": (1, 0, 0), "man_en": (1, 0, 0)},
    ),
    "ar02": (
        ["قالت", "اسرائيل", "ان", "اسرائيل", "لن", "تنسحب"],
        [("Israel", 1), ("said", 0), ("that", 2), ("Israel", None), ("will not", 4),
         ("withdraw", 5), (".", None)],
        "Israel said that Israel will not withdraw.",
        ["اسرائيل", "اسرائيل"],
        ["Israel", "Israel"],
        # tag 3 lost; recovered from the repeated word
        {"src": (2, 0, 0), "mt_en": (2, 0, 0), "man_en": (2, 0, 0)},
    ),
    "ar03": (
        ["انفجرت", "سيارة", "مفخخة", "ببغداد"],
        [("A car", 1), ("bomb", 2), ("exploded", 0), ("in Baghdad", 3), (".", None)],
        "A car bomb exploded in Baghdad.",
        ["بغداد"],
        ["Baghdad"],
        # clitic ب stripped because "in" was stripped from the English
        {"src": (1, 0, 0), "mt_en": (1, 0, 0), "man_en": (1, 0, 0)},
    ),
    "ar04": (
        ["سجل", "جوردان", "هدفا", "في", "المباراة"],
        [("Jordan", 1), ("scored", 0), ("a goal", 2), ("in", 3), ("the match", 4), (".", None)],
        "Jordan scored a goal in the match.",
        [],
        [],
        {"src": (0, 1, 0), "mt_en": (0, 1, 0), "man_en": (0, 1, 0)},
    ),
    "ar05": (
        ["زار", "الرئيس", "سوريا", "ولبنان"],
        [("The president", 1), ("visited", 0), ("Syria", 2), ("and Lebanon", 3), (".", None)],
        "The president visited Syria and Lebanon.",
        ["سوريا", "لبنان"],
        ["Syria", "Lebanon"],
        {"src": (2, 0, 0), "mt_en": (2, 0, 0), "man_en": (2, 0, 0)},
    ),
    "ar06": (
        ["وصل", "الوفد", "المصري", "الى", "القاهرة"],
        [("The Egyptian", 2), ("delegation", 1), ("arrived", 0), ("in", 3), ("Cairo", 4), (".", None)],
        "The Egyptian delegation arrived in Cairo.",
        ["المصري", "القاهرة"],
        ["Egyptian", "Cairo"],
        {"src": (1, 0, 1), "mt_en": (1, 0, 1), "man_en": (1, 0, 1)},
    ),
    "ar07": (
        ["قال", "المتحدث", "ان", "الاجتماع", "كان", "مثمرا"],
        [("The spokesman", 1), ("said", 0), ("that", 2), ("the meeting", 3), ("was", 4),
         ("fruitful", 5), (".", None)],
        "The spokesman said that the meeting was fruitful.",
        [],
        [],
        {"src": (0, 0, 0), "mt_en": (0, 0, 0), "man_en": (0, 0, 0)},
    ),
    "ar08": (
        ["سبح", "السياح", "في", "البحر", "الميت"],
        [("Tourists", 1), ("swam", 0), ("in", 2), ("the dead", 4), ("sea", 3), (".", None)],
        "Tourists swam in the Dead Sea.",
        ["البحر الميت"],
        ["Dead Sea"],
        {"src": (0, 0, 1), "mt_en": (0, 0, 1), "man_en": (1, 0, 0)},
    ),
    "ar09": (
        ["ولد", "في", "قرية", "بيت", "ساحور"],
        [("He was born", 0), ("in", 1), ("the village", 2), ("of Beit", 3), ("Sahour", 4), (".", None)],
        "He was born in the village of Beit Sahour.",
        ["بيت ساحور"],
        ["Beit Sahour"],
        {"src": (0, 0, 1), "mt_en": (0, 0, 1), "man_en": (0, 0, 1)},
    ),
    "ar10": (
        ["تظاهر", "الفلسطينيون", "في", "غزة", "والضفة", "الغربية"],
        [("Palestinians", 1), ("demonstrated", 0), ("in", 2), ("Gaza", 3), ("and the West", 4),
         ("Bank", 5), (".", None)],
        "Palestinians demonstrated in Gaza and the West Bank.",
        ["الفلسطينيون", "غزة", "الضفة الغربية"],
        ["Palestinians", "Gaza", "West Bank"],
        {"src": (2, 0, 1), "mt_en": (2, 0, 1), "man_en": (2, 0, 1)},
    ),
    "ar11": (
        ["اشتباكات", "في", "طرابلس", "شمال", "لبنان"],
        [("Clashes", 0), ("in", 1), ("Tripoli", 2), (",", None), ("north", 3), ("of Lebanon", 4),
         (".", None)],
        "Clashes in Tripoli, northern Lebanon.",
        ["طرابلس", "لبنان"],
        ["Tripoli", "Lebanon"],
        {"src": (2, 0, 0), "mt_en": (2, 0, 0), "man_en": (2, 0, 0)},
    ),
    "ar12": (
        ["العراق", "وايران", "جارتان"],
        [("Iraq", 0), ("and Iran", 1), ("are neighbors", 2), (".", None)],
        "Iraq and Iran are neighbours.",
        ["العراق", "ايران"],
        ["Iraq", "Iran"],
        {"src": (2, 0, 0), "mt_en": (2, 0, 0), "man_en": (2, 0, 0)},
    ),
    "ar13": (
        ["انتقل", "من", "دمشق", "الى", "حلب"],
        [("He moved", 0), ("from", 1), ("Damascus", 2), ("to", 3), ("Aleppo", None), (".", None)],
        "He moved from Damascus to Aleppo.",
        ["دمشق", "حلب"],
        ["Damascus", "Aleppo"],
        {"src": (1, 0, 1), "mt_en": (2, 0, 0), "man_en": (2, 0, 0)},
    ),
    "ar14": (
        ["تقع", "مكة", "في", "السعودية"],
        [("Mecca", 1), ("is located", 0), ("in", 2), ("Saudi Arabia", 3), (".", None)],
        "Mecca is in Saudi Arabia.",
        ["مكة", "السعودية"],
        ["Mecca", "Saudi Arabia"],
        {"src": (2, 0, 0), "mt_en": (2, 0, 0), "man_en": (2, 0, 0)},
    ),
    "ar15": (
        ["زار", "البابا", "القدس", "وبيت", "لحم"],
        [("The Pope", 1), ("visited", 0), ("Jerusalem", 2), ("and Bethlehem", 3), (".", None)],
        "The Pope visited Jerusalem and Bethlehem.",
        ["القدس", "بيت لحم"],
        ["Jerusalem", "Bethlehem"],
        # only the first half of بيت لحم kept its tag
        {"src": (1, 1, 1), "mt_en": (2, 0, 0), "man_en": (2, 0, 0)},
    ),
    "ar16": (
        ["عاد", "الامير", "الى", "الكويت"],
        [("The emir", 1), ("returned", 0), ("to", 2), ("Kuwait", 3), (".", None)],
        "The emir returned to Kuwait.",
        ["الكويت"],
        ["Kuwait"],
        {"src": (1, 0, 0), "mt_en": (1, 0, 0), "man_en": (1, 0, 0)},
    ),
    "ar17": (
        ["يفصل", "البحر", "المتوسط", "بين", "المغرب", "واسبانيا"],
        [("The", None), ("Mediterranean", 2), ("Sea", 1), ("separates", 0), ("between", 3),
         ("Morocco", 4), ("and Spain", 5), (".", None)],
        "The Mediterranean Sea separates Morocco and Spain.",
        ["البحر المتوسط", "المغرب", "اسبانيا"],
        ["Mediterranean Sea", "Morocco", "Spain"],
        {"src": (3, 0, 0), "mt_en": (3, 0, 0), "man_en": (3, 0, 0)},
    ),
    "ar18": (
        ["رحب", "رئيس", "وزراء", "لبنان", "بالقرار"],
        [("The Prime", 1), ("Minister", 2), ("of Lebanon", 3), ("welcomed", 0),
         ("the decision", 4), (".", None)],
        "Lebanon's prime minister welcomed the decision.",
        ["لبنان"],
        ["Lebanon"],
        # "of" licenses no clitic, so لبنان keeps its first letter
        {"src": (1, 0, 0), "mt_en": (1, 0, 0), "man_en": (0, 0, 1)},
    ),
    "ar19": (
        ["وصل", "اللاجئون", "الى", "اسطنبول", "من", "سوريا"],
        [("The refugees", 1), ("arrived", 0), ("in", 2), ("Istanbul", 3), ("from", 4),
         ("Syria", 5), (".", None)],
        "The refugees arrived in Istanbul from Syria.",
        ["اسطنبول", "سوريا"],
        ["Istanbul", "Syria"],
        {"src": (2, 0, 0), "mt_en": (2, 0, 0), "man_en": (2, 0, 0)},
    ),
    "ar20": (
        ["ارتفعت", "اسعار", "النفط", "في", "دبي"],
        [("Oil prices", None), ("rose", None), ("in", None), ("Dubai", None), (".", None)],
        "Oil prices rose in Dubai.",
        ["دبي"],
        ["Dubai"],
        # every tag lost
        {"src": (0, 0, 1), "mt_en": (1, 0, 0), "man_en": (1, 0, 0)},
    ),
    "ar21": (
        ["سيطر", "الحوثيون", "على", "صنعاء", "عاصمة", "اليمن"],
        [("The Houthis", 1), ("took control", 0), ("of", 2), ("Sanaa", 3), (",", None),
         ("the capital", 4), ("of Yemen", 5), (".", None)],
        "The Houthis seized Sanaa, the capital of Yemen.",
        ["صنعاء", "اليمن"],
        ["Sanaa", "Yemen"],
        {"src": (2, 0, 0), "mt_en": (2, 0, 0), "man_en": (2, 0, 0)},
    ),
    "ar22": (
        ["زار", "الرئيس", "كييف"],
        [("The president", 1), ("visited", 0), ("Kiev", 2), (".", None)],
        "The president visited Kyiv.",
        ["كييف"],
        ["Kyiv"],
        {"src": (1, 0, 0), "mt_en": (0, 1, 1), "man_en": (1, 0, 0)},
    ),
}


def write_corpus(lang, docs, sep, html, extra=None):
    root = DATA / "samples" / lang
    root.mkdir(parents=True, exist_ok=True)
    for old in root.glob("*.txt"):
        old.unlink()
    fixtures, gold, expected = [], [], {"src": {}, "mt_en": {}, "man_en": {}}
    items = list((extra or {}).items()) + list(docs.items())
    for doc_id, (chunks, pieces, manual, gold_src, gold_en, expect) in sorted(items):
        if chunks is None:
            source = WORKED_ZH_SOURCE
            fixtures.append(worked_examples()[0])
        else:
            source = sep.join(chunks)
            if html:
                fixtures.append(
                    {"source_lang": lang, "source_text": source,
                     "translated_html": tagged_html(pieces, lang)}
                )
            else:
                fixtures.append(rec(lang, chunks, pieces, sep))
        (root / f"{doc_id}.txt").write_text(source + "\n", encoding="utf-8")
        (root / f"{doc_id}.en.txt").write_text(manual + "\n", encoding="utf-8")
        rows = gold_rows(doc_id, source, gold_src, lang)
        en_rows = gold_rows(doc_id, manual, gold_en, "en")
        gold += rows + [r for r in en_rows if "\t" in r]
        for k in expected:
            expected[k][doc_id] = list(expect[k])
    jsonl(root / "fixtures.jsonl", fixtures)
    (root / "gold.tsv").write_text(
        "# doc_id\tstart\tend\tsurface\tlang\n" + "\n".join(gold) + "\n", encoding="utf-8"
    )
    (root / "expected_counts.json").write_text(
        json.dumps(expected, indent=1, ensure_ascii=False, sort_keys=True) + "\n", encoding="utf-8"
    )
    (root / "pipeline.cfg").write_text(
        f"# sample corpus settings; paths are relative to this file\n"
        f"lang = {lang}\nprovider = fixture\nfixtures = fixtures.jsonl\ngold = gold.tsv\n",
        encoding="utf-8",
    )


def main():
    jsonl(DATA / "fixtures" / "worked_examples.jsonl", worked_examples())
    zh01 = {"zh01": (None, None, ZH01["manual"], ZH01["gold_src"], ZH01["gold_en"], ZH01["expect"])}
    write_corpus("zh", ZH_DOCS, "", html=False, extra=zh01)
    write_corpus("ar", AR_DOCS, " ", html=True)


if __name__ == "__main__":
    main()
