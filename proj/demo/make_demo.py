"""Regenerates the demo inputs and scripted backend fixtures.

Run from anywhere: python3 demo/make_demo.py
Outputs (all under demo/): real/*.txt, situations.jsonl, fixtures/*.jsonl
"""
import json
import re
from pathlib import Path

HERE = Path(__file__).resolve().parent

# ---------------------------------------------------------------- real data

REAL = {
    "real-01-insomnia": [
        ("Patient", "I have not slept more than four hours a night for about three weeks now."),
        ("Therapist", "Three weeks of short nights is exhausting. What happens when you get into bed?"),
        ("Patient", "My mind starts replaying every conversation from the day and I check the clock constantly."),
        ("Therapist", "So the clock checking and the replaying feed each other. What do you tell yourself when you see the time?"),
        ("Patient", "That tomorrow is ruined already and that I will make mistakes at work because of it."),
        ("Therapist", "That is a big prediction to carry at two in the morning. Has a bad night ever been followed by a decent day?"),
        ("Patient", "Actually yes, last Thursday I was tired but the presentation went fine."),
        ("Therapist", "Let's keep that Thursday in mind. This week, could you turn the clock away and note what the next day was really like?"),
    ],
    "real-02-grief": [
        ("Client", "Since my father died in the spring I feel guilty whenever I laugh at anything."),
        ("Counselor", "Losing your father is enormous, and guilt around laughter is very common. When did you last notice it?"),
        ("Client", "At my niece's birthday party, I laughed at a joke and then had to leave the room."),
        ("Counselor", "What went through your mind right before you stepped out?"),
        ("Client", "That enjoying myself means I did not love him enough, which is a terrible thing to think."),
        ("Counselor", "It sounds painful. If a friend said that about their own laughter, what would you want them to hear?"),
        ("Client", "I would tell them their dad would want them to be happy at a family party."),
        ("Counselor", "Could you try saying that same sentence to yourself the next time the guilt shows up?"),
    ],
    "real-03-workplace": [
        ("Client", "My manager criticised my report in front of the whole team and I keep reliving it."),
        ("Counselor", "Being criticised publicly stings. What part of it keeps coming back to you?"),
        ("Client", "The way everyone went quiet. I am sure they all think I am incompetent now."),
        ("Counselor", "You sound certain about what they think. What evidence do you have either way?"),
        ("Client", "Well, two colleagues messaged afterwards to say the comment was unfair to me."),
        ("Counselor", "That seems important. How does that fit with the idea that everyone sees you as incompetent?"),
        ("Client", "It does not fit really. Maybe it was only my manager who was unhappy with that section."),
        ("Counselor", "Would it help to plan how you might ask your manager for specific feedback on the report?"),
    ],
    "real-04-social": [
        ("Counselor", "Welcome back. Last time we agreed to look at the office party invitation."),
        ("Client", "I declined the invitation for Friday drinks again even though I wanted to go."),
        ("Counselor", "Part of you wanted to go. What stopped you in the moment you declined?"),
        ("Client", "I pictured standing alone with a drink while everyone else chatted in little groups."),
        ("Counselor", "That picture is vivid. How likely do you think it is, honestly, out of a hundred?"),
        ("Client", "Maybe thirty percent, because I do get on with two people from my floor."),
        ("Counselor", "So seventy percent of the time something else happens. What might a small first step look like?"),
        ("Client", "I could ask one of them if they are going and walk over together after work."),
        ("Counselor", "That sounds like a manageable experiment. Let's note what you predict and compare afterwards."),
    ],
    "real-05-perfectionism": [
        ("Client", "I rewrote my thesis introduction eleven times this month and it still feels wrong."),
        ("Counselor", "Eleven drafts is a lot of effort. What would make it feel right to you?"),
        ("Client", "It has to be perfect or my supervisor will realise I never belonged in the programme."),
        ("Counselor", "So one imperfect paragraph would prove you do not belong. Is that the rule you are living by?"),
        ("Client", "When you say it out loud it sounds extreme, but that is how it feels every single time."),
        ("Counselor", "Feelings can be convincing. What has your supervisor actually said about your earlier drafts?"),
        ("Client", "She said the argument was strong and only the structure needed some tightening."),
        ("Counselor", "What if you set a limit of one more draft focusing only on structure, then send it to her?"),
    ],
    "real-06-panic": [
        ("Client", "I had another panic attack on the motorway and had to pull onto the hard shoulder."),
        ("Counselor", "That sounds frightening. What did you notice in your body first?"),
        ("Client", "My heart started pounding and I was convinced I was about to faint at the wheel."),
        ("Counselor", "Have you ever actually fainted during one of these episodes?"),
        ("Client", "No, never. It always peaks and then slowly fades after ten minutes or so."),
        ("Counselor", "So your body has shown you many times that the wave passes. What do you make of that?"),
        ("Client", "That maybe the fainting thought is the scariest part rather than what really happens."),
        ("Counselor", "Let's practise slow breathing now and plan a short drive on a quieter road this week."),
    ],
    "real-07-parenting": [
        ("Client", "I shouted at my fifteen year old son again last night over his phone and homework."),
        ("Counselor", "It sounds like the evening escalated. What was happening just before you shouted?"),
        ("Client", "I had asked him three times to start his homework and he just ignored me completely."),
        ("Counselor", "Being ignored three times would frustrate most parents. What did you tell yourself then?"),
        ("Client", "That he has no respect for me and that I have failed as a father, full stop."),
        ("Counselor", "That is a heavy conclusion from one evening. Are there times he does listen to you?"),
        ("Client", "He helps me with the cooking on Sundays and we talk a lot while we do that."),
        ("Counselor", "Maybe that Sunday connection is something to build on. Could homework be discussed at a calmer time?"),
    ],
    "real-08-loneliness": [
        ("Client", "Since moving to this city for work six months ago I have not made a single friend."),
        ("Counselor", "Six months in a new place can feel very isolating. How do your evenings usually look?"),
        ("Client", "I come home, eat in front of the television and scroll through old photos from home."),
        ("Counselor", "How do you feel after looking at those photos?"),
        ("Client", "Worse, honestly. It reminds me that nobody here would notice if I disappeared for a week."),
        ("Counselor", "That sounds very lonely. Are you having any thoughts of harming yourself when you feel that way?"),
        ("Client", "No, nothing like that. I just feel invisible and stuck in the same routine every day."),
        ("Counselor", "Thank you for telling me. Let's list a few activities here that match things you enjoyed back home."),
    ],
    "real-09-health": [
        ("Client", "I found a small bruise on my leg and spent four hours reading about leukaemia online."),
        ("Counselor", "Four hours is a long time to spend searching. How did you feel by the end of it?"),
        ("Client", "Terrified. I was sure my symptoms matched and I almost went to the emergency room."),
        ("Counselor", "What other explanations for the bruise could there be?"),
        ("Client", "I did move a heavy bookcase on Saturday, and I probably knocked my leg on it then."),
        ("Counselor", "That is a very ordinary explanation. What usually happens to your anxiety after searching?"),
        ("Client", "It calms down for a few minutes and then I find something new to worry about."),
        ("Counselor", "So searching brings short relief and longer worry. Could we try delaying the search by an hour next time?"),
    ],
    "real-10-procrastination": [
        ("Client", "I have a tax form due on Friday and I have not even opened the envelope yet."),
        ("Counselor", "It sounds like the envelope has become quite loaded. What comes up when you look at it?"),
        ("Client", "A sinking feeling that I will get everything wrong and end up owing a huge fine."),
        ("Counselor", "That is a frightening outcome to picture. What is the very first small step on the form?"),
        ("Client", "Just opening it and finding the reference number, which honestly takes two minutes."),
        ("Counselor", "Two minutes sounds doable. When today could you spend those two minutes?"),
        ("Client", "Right after lunch, before I start answering emails for the afternoon shift."),
        ("Counselor", "Great. Let's also plan who you could ask if a section of the form is confusing."),
    ],
}

# Near copy of real-06 (dropped by dedup) and a too-short transcript (rejected
# by the quality filter) show the ingest stage doing its job.
NEAR_DUPLICATE = ("real-06b-panic-repost", "real-06-panic")
TOO_SHORT = ("real-99-fragment", [
    ("Client", "I am not sure I want to be here."),
    ("Counselor", "That's okay, we can go slowly."),
])
CONTACT_LINE = " You can reach me at jamie.doe@example.com or 555-123-4567 if needed."

# ------------------------------------------------------------ synthetic data

PERSONAS = [
    dict(age=34, occupation="nurse", cultural_background="Filipino-American",
         challenges=["burnout from night shifts", "guilt about missing family events"],
         traits=["conscientious", "self-critical"], theme="work stress",
         distortions=["Should Statements", "Personalization"], place="hospital ward",
         detail="she swapped three shifts this month to cover for colleagues"),
    dict(age=19, occupation="first-year engineering student", cultural_background="Nigerian",
         challenges=["fear of failing exams", "homesickness"],
         traits=["ambitious", "reserved"], theme="academic pressure",
         distortions=["All-or-Nothing Thinking", "Fortune Telling"], place="university library",
         detail="he scored below average on his first calculus quiz"),
    dict(age=52, occupation="warehouse supervisor", cultural_background="Polish",
         challenges=["recent divorce", "drinking more on weekends"],
         traits=["stoic", "loyal"], theme="relationship loss",
         distortions=["Overgeneralization", "Labeling and Mislabeling"], place="empty flat",
         detail="his daughter cancelled their Sunday lunch for the second time"),
    dict(age=27, occupation="graphic designer", cultural_background="Korean-Canadian",
         challenges=["social anxiety at client meetings", "imposter feelings"],
         traits=["creative", "perfectionistic"], theme="social anxiety",
         distortions=["Mind Reading", "Disqualifying the Positive"], place="client pitch",
         detail="a client paused for a long time after seeing her first draft"),
    dict(age=68, occupation="retired postal worker", cultural_background="Irish",
         challenges=["loneliness after his wife's death", "worry about his health"],
         traits=["gentle", "talkative"], theme="grief",
         distortions=["Magnification (Catastrophizing) or Minimization", "Mental Filter"],
         place="garden allotment", detail="his neighbour stopped visiting the allotment"),
    dict(age=41, occupation="secondary school teacher", cultural_background="Mexican",
         challenges=["conflict with her teenage daughter", "feeling undervalued at work"],
         traits=["caring", "outspoken"], theme="family conflict",
         distortions=["Emotional Reasoning", "Should Statements"], place="kitchen table",
         detail="her daughter stayed out two hours past curfew"),
    dict(age=23, occupation="barista", cultural_background="Brazilian",
         challenges=["panic attacks on public transport", "financial insecurity"],
         traits=["friendly", "impulsive"], theme="panic",
         distortions=["Magnification (Catastrophizing) or Minimization", "Emotional Reasoning"],
         place="crowded tram", detail="she left the tram two stops early to escape the crowd"),
    dict(age=45, occupation="software project manager", cultural_background="Indian",
         challenges=["constant overworking", "difficulty delegating"],
         traits=["organised", "anxious"], theme="perfectionism",
         distortions=["All-or-Nothing Thinking", "Personalization"], place="sprint review",
         detail="a release slipped by one week after a vendor delay"),
    dict(age=30, occupation="new father and accountant", cultural_background="Scottish",
         challenges=["sleep deprivation", "doubts about being a good parent"],
         traits=["analytical", "quiet"], theme="life transition",
         distortions=["Labeling and Mislabeling", "Fortune Telling"], place="nursery at 3am",
         detail="his baby cried for an hour and he could not settle her"),
    dict(age=58, occupation="small bakery owner", cultural_background="Lebanese",
         challenges=["fear of the business closing", "tension with his business partner"],
         traits=["proud", "hardworking"], theme="financial worry",
         distortions=["Fortune Telling", "Mental Filter"], place="bakery counter",
         detail="monthly sales dropped after a chain café opened nearby"),
]

SESSION_LINES = [
    # (client opening, counselor reflection, client thought, counselor question, client insight, counselor plan)
    ("I keep thinking I should be able to handle every shift without complaining.",
     "You hold yourself to a very high standard. What happens when you cannot meet it?",
     "I feel like I am letting the whole ward down, as if every problem is my fault.",
     "Let's look at that. Which of this month's problems were actually within your control?",
     "Honestly, the staffing gaps were decided by management, not by me.",
     "Good observation. This week, could you notice each 'should' and rewrite it as a preference?"),
    ("I failed my first calculus quiz, so I am obviously going to fail the whole degree.",
     "That quiz really shook you. What is the evidence that one quiz decides the degree?",
     "Well, it counts for five percent and there are two midterms and a final exam.",
     "So most of the grade is still ahead. What could you do differently before the next quiz?",
     "I could go to the tutorial sessions instead of studying alone in my room.",
     "That sounds like a useful experiment. Let's write down what you expect and check it afterwards."),
    ("My daughter cancelled lunch again. Everyone in my life ends up leaving me.",
     "That cancellation clearly hurt. When you say everyone leaves, who comes to mind?",
     "My ex-wife, and now my daughter, though my brother still calls me every week.",
     "So your brother stays in touch. How does that fit with the idea that everyone leaves?",
     "It doesn't, I suppose. I just feel like a failure as a father when she cancels.",
     "Being hurt doesn't make you a failure. Could you ask her about another date this week?"),
    ("The client went silent after my draft and I know she thought it was amateurish.",
     "You seem sure about what she was thinking. What did she actually say afterwards?",
     "She said she needed a moment, then asked for two small changes to the colours.",
     "Two small changes. Is there another way to read her silence?",
     "Maybe she was just taking it in. I never count the projects that go well.",
     "Let's start a short log of positive feedback so those projects get counted too."),
    ("Since Mary died the allotment is all I have, and now even that feels empty and pointless.",
     "Losing Mary changed everything. What do you notice when you are at the allotment now?",
     "I only see the weeds and the empty bench where my neighbour used to sit.",
     "What else is there, alongside the weeds and the bench?",
     "The tomatoes Mary planted came up again this year, which surprised me a lot.",
     "That sounds meaningful. Could you invite someone to see those tomatoes with you this week?"),
    ("I feel so angry with my daughter that I know I must be a terrible mother.",
     "Feeling angry is painful. Does the feeling prove that you are a terrible mother?",
     "It feels that way at night when I lie awake replaying our argument about curfew.",
     "Feelings at night can be loud. What would a calmer version of you say about the argument?",
     "That she broke a rule and I reacted strongly, but I also love her very much.",
     "That is a balanced view. Shall we plan how to talk with her about curfew when you are both calm?"),
    ("On the tram my chest got tight and I was sure I was having a heart attack.",
     "That must have been terrifying. What did you do when the tightness started?",
     "I jumped off two stops early and walked home shaking, feeling like an idiot.",
     "You felt like an idiot. What does your doctor say about your heart?",
     "She said my heart is healthy and that this is anxiety, which I sort of believe.",
     "Let's practise slow breathing and plan one short tram ride where you stay on until your stop."),
    ("The release slipped a week and I feel it is entirely my fault as the project manager.",
     "You take a lot of responsibility. What caused the delay in practical terms?",
     "The vendor shipped the wrong library version and we had to wait for a fix.",
     "So part of it came from outside the team. What share would you honestly assign to yourself?",
     "Maybe ten percent, for not having a backup plan for the vendor dependency.",
     "That sounds fair. Let's turn that ten percent into one concrete improvement for the next release."),
    ("When my baby cried for an hour I thought I am useless and she would be better off without me.",
     "Those are heavy thoughts. Are you having any thoughts of harming yourself or her?",
     "No, nothing like that, I just feel completely useless and exhausted all the time.",
     "Thank you for telling me. What did you actually do during that hour with her?",
     "I walked her, changed her, sang to her, and eventually she fell asleep on my chest.",
     "That sounds like a caring father doing many things. Let's talk about getting you some rest this week."),
    ("Sales dropped again this month and I can see the bakery closing by Christmas.",
     "That is a frightening prediction. What do the numbers show over the whole year?",
     "Summer was strong, it is only the last two months that have been slow.",
     "So the picture is mixed. What tends to happen to sales in your bakery around the holidays?",
     "Usually December is our best month because of the special orders for families.",
     "Let's plan how to promote those holiday orders, and check the numbers again in January."),
]

SESSION_SCORES = [(8, 8, 9), (9, 8, 8), (7, 8, 8), (8, 9, 8), (9, 9, 9),
                  (8, 7, 8), (8, 8, 7), (9, 8, 9), (7, 7, 8), (8, 8, 8)]


def narrative(p, pid):
    pron = "she" if p["occupation"] in ("nurse", "graphic designer", "secondary school teacher", "barista") else "he"
    poss = "her" if pron == "she" else "his"
    text = (
        f"The client is a {p['age']}-year-old {p['occupation']} with a {p['cultural_background']} background. "
        f"Recently {p['detail']}, and the moment keeps replaying in {poss} mind, especially around the {p['place']}. "
        f"{pron.capitalize()} describes {p['challenges'][0]} and {p['challenges'][1]} as the two pressures that shape most days. "
        f"Friends see {pron == 'she' and 'her' or 'him'} as {p['traits'][0]} and {p['traits'][1]}, yet in private {pron} doubts almost every decision. "
        f"When things go wrong {pron} quickly draws sweeping conclusions about {poss} worth and about what will happen next. "
        f"{pron.capitalize()} has started avoiding situations that remind {pron == 'she' and 'her' or 'him'} of the {p['place']}, which brings short relief but makes the worry grow. "
        f"{pron.capitalize()} comes to counseling hoping to understand these patterns, to feel calmer, and to find one or two practical steps "
        f"that could make the coming weeks more manageable."
    )
    assert len(text.split()) >= 100, (pid, len(text.split()))
    return text


# ---------------------------------------------------------------- benchmark

SITUATIONS = [
    dict(id="bench-001", key="lighthouse", summary="A lighthouse museum guide fears public speaking after stumbling during a tour.",
         distortions=["Mind Reading"],
         lines=["My name is Alex and I guide tours at the lighthouse museum, and last week I froze halfway through my talk.",
                "I keep thinking the visitors were laughing at me the whole time, even the ones who thanked me.",
                "I guess I could try the next tour with notes in my pocket. Thank you, this helped. [END_SESSION]"],
         topic="freezing during the lighthouse tour", feeling="embarrassed"),
    dict(id="bench-002", key="marathon", summary="A recreational runner feels worthless after pulling out of a marathon with an injury.",
         distortions=["All-or-Nothing Thinking"],
         lines=["I trained eight months for the marathon and then pulled out at kilometre thirty with a knee injury.",
                "If I did not finish, then all that training was pointless and I am just not a real runner.",
                "Maybe I can sign up for a shorter race in spring while my knee heals. [END_SESSION]"],
         topic="pulling out of the marathon", feeling="deflated"),
    dict(id="bench-003", key="orchestra", summary="A violinist in an amateur orchestra believes one wrong note will get her dismissed.",
         distortions=["Fortune Telling"],
         lines=["I play second violin in an amateur orchestra and I played a wrong note at the orchestra dress rehearsal.",
                "I am sure the conductor will replace me before the concert, I can already picture the email.",
                "I could ask the section leader how the rehearsal sounded to her before assuming the worst. [END_SESSION]"],
         topic="the wrong note at rehearsal", feeling="anxious"),
    dict(id="bench-004", key="greenhouse", summary="A retired gardener feels useless since a storm destroyed his greenhouse.",
         distortions=["Labeling and Mislabeling"],
         lines=["A storm flattened my greenhouse last month and since then I have not gone into the garden at all.",
                "Without it I am just a useless old man sitting indoors, that is how it feels every day.",
                "My grandson offered to help rebuild it, maybe I will call him this weekend. [END_SESSION]"],
         topic="losing the greenhouse", feeling="lost"),
    dict(id="bench-005", key="spreadsheet", summary="An office clerk believes a spreadsheet error proves she is incompetent.",
         distortions=["Overgeneralization"],
         lines=["I made an error in the quarterly spreadsheet and my team had to redo a whole report because of it.",
                "I always mess things up, every job I have had ends with me making some stupid mistake.",
                "I suppose I could set up a checklist for the next quarterly report and ask a colleague to review it. [END_SESSION]"],
         topic="the spreadsheet error", feeling="ashamed"),
]

MODELS = {
    "base": [
        "Thank you for sharing that. When you think about {topic}, what thought comes up first for you?",
        "Let's write that thought down and look at the evidence for and against it together.",
    ],
    "real": [
        "Okay. Tell me a bit more about {topic}.",
        "Mm. And what did you do after that?",
    ],
    "hybrid": [
        "It sounds like {topic} has left you feeling {feeling}, and that makes a lot of sense. What goes through your mind in those moments?",
        "That is a painful thought to carry. What might you say to a friend who told you the same thing about themselves?",
    ],
}

# Conversation judge answers per (model, situation index).
BENCH_SCORES = {
    "base": [(8.5, 8.1), (8.4, 8.0), (8.6, 8.2), (8.3, 7.9), (8.6, 8.2)],
    "real": [(7.3, 7.2), (7.4, 7.3), (7.2, 7.1), (7.3, 7.3), (7.4, 7.3)],
    "hybrid": [(8.6, 8.7), (8.7, 8.6), (8.6, 8.7), (8.5, 8.6), (8.8, 8.7)],
}


def situation_narrative(s):
    text = (
        f"{s['summary']} The client opens the session by describing {s['topic']} and says the memory returns "
        f"several times a day, often when things are quiet. The client reports feeling {s['feeling']} and has begun "
        f"to avoid reminders of the event, telling friends that everything is fine while privately expecting the "
        f"worst. Sleep has become lighter and concentration at home has slipped. There is no history of self-harm "
        f"and the client has a supportive relative nearby. The client hopes the counselor can help untangle what "
        f"happened from what the client fears it means, and wants to leave with one realistic next step."
    )
    assert len(text.split()) >= 100, (s["id"], len(text.split()))
    return text


def shingles(text, n=4):
    words = re.findall(r"[a-z0-9']+", text.lower())
    return {tuple(words[i:i + n]) for i in range(len(words) - n + 1)}


def jaccard(a, b):
    return len(a & b) / len(a | b)


def write_jsonl(path, rows):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        for r in rows:
            f.write(json.dumps(r, ensure_ascii=False, sort_keys=True) + "\n")


def main():
    real_dir = HERE / "real"
    real_dir.mkdir(exist_ok=True)
    for old in real_dir.glob("*.txt"):
        old.unlink()
    for sid, turns in REAL.items():
        lines = [f"{who}: {text}" for who, text in turns]
        if sid == "real-03-workplace":
            lines[0] += CONTACT_LINE
        (real_dir / f"{sid}.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    dup_id, src = NEAR_DUPLICATE
    dup_turns = list(REAL[src])
    dup_turns[-1] = (dup_turns[-1][0], dup_turns[-1][1] + " See you next week.")
    (real_dir / f"{dup_id}.txt").write_text(
        "\n".join(f"{w}: {t}" for w, t in dup_turns) + "\n", encoding="utf-8")
    sim = jaccard(shingles(" ".join(t for _, t in REAL[src])), shingles(" ".join(t for _, t in dup_turns)))
    assert sim >= 0.9, sim
    short_id, short_turns = TOO_SHORT
    (real_dir / f"{short_id}.txt").write_text(
        "\n".join(f"{w}: {t}" for w, t in short_turns) + "\n", encoding="utf-8")

    gen, judge = [], []
    for i, p in enumerate(PERSONAS):
        pid = f"p{i + 1:04d}"
        sc_id = f"{pid}-s1"
        lines = SESSION_LINES[i]
        dialogue = "\n".join(
            ("Client: " if k % 2 == 0 else "Counselor: ") + line for k, line in enumerate(lines))
        # Session rules first: the session prompt also mentions the persona id.
        gen.append({"match": f"Scenario id: {sc_id}\n", "reply": dialogue})
        gen.append({"match": f"Client persona ({pid}):", "reply": json.dumps({
            "summary": f"A {p['occupation']} struggling with {p['challenges'][0]}.",
            "cognitive_distortions": p["distortions"],
            "scenario": narrative(p, pid),
        })})
        gen.append({"match": f"Create persona {i + 1} of {len(PERSONAS)}.", "reply": json.dumps({
            "age": p["age"], "occupation": p["occupation"],
            "cultural_background": p["cultural_background"],
            "challenges": p["challenges"], "traits": p["traits"],
        })})
        c, r, t = SESSION_SCORES[i]
        judge.append({"match": lines[0], "reply":
                      f"coherence: {c}\nrealism: {r}\ntherapeutic_value: {t}\n"
                      f"rationale: Consistent flow with a concrete CBT step at the end."})

    patient, counselors = [], {m: [] for m in MODELS}
    bench_judge = []
    situations = []
    for si, s in enumerate(SITUATIONS):
        situations.append({"scenario_id": s["id"], "persona_id": "bench", "summary": s["summary"],
                           "distortions": s["distortions"], "narrative": situation_narrative(s)})
        for k, line in enumerate(s["lines"]):
            patient.append({"match": s["key"], "message_count": 1 + 2 * k, "reply": line})
        for model, replies in MODELS.items():
            first = replies[0].format(topic=s["topic"], feeling=s["feeling"])
            for k, reply in enumerate(replies):
                counselors[model].append({"match": s["key"], "message_count": 1 + 2 * k,
                                          "reply": reply.format(topic=s["topic"], feeling=s["feeling"])})
            e, rel = BENCH_SCORES[model][si]
            bench_judge.append({"match": first, "reply":
                                f"empathy: {e}\nrelevance: {rel}\nrationale: Judged on the counselor turns only."})

    items = [
        {"match": "Rate the following synthetic persona", "reply":
         "correctness: 9\nnaturalness: 8\nrationale: Plausible profile with concrete challenges."},
        {"match": "Rate the following synthetic scenario", "reply":
         "correctness: 8\nnaturalness: 8\nrationale: Narrative fits the persona and labeled distortions."},
    ]
    fixtures = HERE / "fixtures"
    write_jsonl(fixtures / "generator.jsonl", gen)
    write_jsonl(fixtures / "judge.jsonl", items + bench_judge + judge)
    write_jsonl(fixtures / "patient.jsonl", patient)
    for model, rules in counselors.items():
        write_jsonl(fixtures / f"counselor_{model}.jsonl", rules)
    write_jsonl(HERE / "situations.jsonl", situations)


if __name__ == "__main__":
    main()
