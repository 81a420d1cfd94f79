"""
Model files and the HTTP service
================================

Train a model, save the versioned artifact, serve it over HTTP and check
that the service returns exactly what the in-process scorer computes.
"""

import json
import tempfile
import urllib.request

import numpy as np

from citeworth.artifact import load_artifact, save_artifact
from citeworth.corpus import CorpusSplit, LabeledSentence
from citeworth.pipeline import SentenceScorer, train_model
from citeworth.service import make_server, start_background

rng = np.random.default_rng(0)
FILLER = ["assay", "sample", "tissue", "control", "buffer", "growth"]
sentences = []
for i in range(100):
    label = i % 3 == 0
    words = [FILLER[rng.integers(0, len(FILLER))] for _ in range(5)]
    if label:
        words[rng.integers(0, 5)] = "previously"
    text = " ".join(words).capitalize() + "."
    sentences.append(LabeledSentence(f"svc:{i}", text, label, "intro",
                                     len(text), len(text.split())))
split = CorpusSplit(train=sentences[:70], validation=sentences[70:85],
                    test=sentences[85:])

artifact = train_model("enlr", split, contextual=True,
                       alpha_grid=(0.5,), lambda_grid=(0.001,), cv_folds=1)
with tempfile.NamedTemporaryFile(suffix=".json", delete=False) as fh:
    model_path = fh.name
save_artifact(artifact, model_path)
print("artifact header:", load_artifact(model_path).info())

server = make_server(model_file=model_path, port=0)
start_background(server)
host, port = server.socket.getsockname()[:2]
base = f"http://{host}:{port}"

with urllib.request.urlopen(f"{base}/api/health") as resp:
    print("health:", json.loads(resp.read()))

payload = json.dumps({
    "raw_text": "Tissue sample previously control buffer. Assay growth buffer sample control.",
    "threshold": 0.5,
}).encode()
req = urllib.request.Request(f"{base}/api/predict", data=payload,
                             headers={"Content-Type": "application/json"})
with urllib.request.urlopen(req) as resp:
    body = json.loads(resp.read())
for s in body["sentences"]:
    print(f"  worthy={s['worthy']}  p={s['probability']:.3f}  {s['text']}")

local = SentenceScorer(load_artifact(model_path)).predict(
    raw_text="Tissue sample previously control buffer. Assay growth buffer sample control.")
agree = all(
    abs(a["probability"] - b.probability) <= 1e-9
    for a, b in zip(body["sentences"], local)
)
print("service == in-process scorer:", agree)
server.shutdown()
server.server_close()
