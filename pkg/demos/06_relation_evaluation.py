"""Relation evaluation offline: extract a subgraph, prompt a model, score the answer.

Self-contained: writes a toy relatedness graph and a canned model response into
a temporary directory, then replays the full pipeline deterministically.
"""

import tempfile
from pathlib import Path

from hgrec import SubgraphSpec, extract_subgraph, ingest_edge_list, render_prompt
from hgrec.kgeval import evaluate_response, prompt_key, replay_completion

TOY_KG = """\
table\tfurniture\t0.9
table\thouse\t0.8
furniture\troom\t0.7
house\troom\t0.6
room\tplate\t0.5
"""

# The model answered with three of the four true edges plus two spurious ones.
CANNED_RESPONSE = """\
Here is the edgelist:
1. table - furniture
2. (table, house)
3. furniture - room
4. table - room
5. house - furniture
Those are the most related pairs.
"""

with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    kg_path = tmp / "toy.tsv"
    kg_path.write_text(TOY_KG, encoding="utf-8")

    kg = ingest_edge_list(kg_path)
    truth, entities = extract_subgraph(kg, SubgraphSpec(source="table", k=2, d=2))
    print("chosen entities (BFS order):", entities)
    print("truth edges:", sorted(truth.edges))

    prompt = render_prompt(entities, k=2)
    print("\nprompt:\n" + prompt)

    # Offline replay: responses live in files named by the prompt's SHA-256.
    responses = tmp / "responses"
    responses.mkdir()
    (responses / f"{prompt_key(prompt)}.txt").write_text(CANNED_RESPONSE, encoding="utf-8")
    response = replay_completion(responses, prompt)

    result = evaluate_response(truth, entities, response)
    print("\nnormalized L1 score:", result.score)
    print("missing edges:", result.missing)
    print("spurious edges:", result.spurious)
    print("unparsed lines:", list(result.unparsed_lines))
