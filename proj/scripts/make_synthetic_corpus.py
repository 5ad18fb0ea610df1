#!/usr/bin/env python3
"""Regenerates data/fixtures/synthetic_corpus.jsonl.

200 utterances across 8 language-region tags with sentence-level timestamps.
Deterministic: same seed, same bytes. Texts avoid '<' so rendered token
streams stay unambiguous, and punctuation presence always matches the punct
flag.
"""

import json
import random
from pathlib import Path

WORDS = {
    ("zh", "CN"): ["你好", "世界", "我们", "今天", "天气", "很好", "学习", "语言", "朋友", "说话"],
    ("ja", "JP"): ["こんにちは", "世界", "今日", "天気", "勉強", "言葉", "友達", "話す"],
    ("ko", "KR"): ["안녕하세요", "세계", "오늘", "날씨", "공부", "언어", "친구", "말하기"],
    ("th", "TH"): ["สวัสดี", "โลก", "วันนี้", "อากาศ", "เรียน", "ภาษา", "เพื่อน", "พูด"],
    ("ru", "RU"): ["привет", "мир", "сегодня", "погода", "учим", "язык", "друзья", "говорить"],
    ("vi", "VN"): ["xin", "chào", "thế", "giới", "hôm", "nay", "thời", "tiết", "bạn", "nói"],
    ("ar", "EG"): ["مرحبا", "بالعالم", "اليوم", "الطقس", "نتعلم", "اللغة", "صديق", "يتكلم"],
    ("hi", "IN"): ["नमस्ते", "दुनिया", "आज", "मौसम", "सीखना", "भाषा", "दोस्त", "बोलना"],
}

FULL_STOP = {("zh", "CN"): "。", ("ja", "JP"): "。"}


def make_sentence(rng, lang, region, punctuated, with_digits):
    words = rng.sample(WORDS[(lang, region)], k=rng.randint(2, 6))
    if with_digits:
        words.append(str(rng.randint(2, 999)))
    sep = "" if (lang, region) in FULL_STOP else " "
    text = sep.join(words)
    if punctuated:
        text += FULL_STOP.get((lang, region), ".")
    return text


def make_utterance(rng, lang, region, index):
    punctuated = rng.random() < 0.5
    itn = rng.random() < 0.15
    n_sentences = rng.randint(1, 3)
    duration = round(rng.uniform(2.5 * n_sentences + 1.0, 29.0), 1)
    # Sequential sentences with small gaps, all inside [0, duration].
    sentences = []
    cursor = round(rng.uniform(0.0, 0.4), 2)
    budget = (duration - cursor - 0.2) / n_sentences
    for _ in range(n_sentences):
        length = round(rng.uniform(max(1.5, budget * 0.6), budget * 0.95), 2)
        sentences.append({
            "start": round(cursor, 2),
            "end": round(cursor + length, 2),
            "text": make_sentence(rng, lang, region, punctuated, itn),
        })
        cursor += budget
    uid = f"{lang}{region}-{index:04d}"
    return {
        "id": uid,
        "audio": f"audio/{uid}.wav",
        "duration_s": duration,
        "lang": lang,
        "region": region,
        "punct": punctuated,
        "itn": itn,
        "dataset": "synthetic",
        "sentences": sentences,
    }


def main():
    rng = random.Random(20250809)
    out = Path(__file__).resolve().parent.parent / "data" / "fixtures" / "synthetic_corpus.jsonl"
    records = []
    for lang, region in WORDS:
        for i in range(25):
            records.append(make_utterance(rng, lang, region, i))
    with out.open("w", encoding="utf-8") as f:
        for r in records:
            f.write(json.dumps(r, ensure_ascii=False) + "\n")
    print(f"wrote {len(records)} utterances to {out}")


if __name__ == "__main__":
    main()
