"""
Driving the command line from a config file
===========================================

Writes a config for T1 on two points, then runs a few subcommands.
"""
import json
import tempfile
from pathlib import Path

from tiltgen.cli import parse_config, render_config, run_command

config = {
    "space": {"blowup_p2": {"centers": [{"coords": [1, 0, 0]}, {"coords": ["1/2", 1, 0]}]}},
    "collection": [{"line_bundle": [0, 0, 0]}, {"line_bundle": [0, 1, 0]}, {"line_bundle": [0, 0, 1]},
                   {"line_bundle": [1, 0, 0]}, {"line_bundle": [2, 0, 0]}],
    "options": {"anticanonical_smooth_member": True},
}
path = Path(tempfile.mkdtemp()) / "t1_b2.json"
path.write_text(json.dumps(config))

# Rendering is canonical, so parse(render(doc)) == doc.
doc = parse_config(path.read_text())
print(render_config(doc))

for argv in (["gentime", "--config", str(path)],
             ["check", "--config", str(path)],
             ["reproduce", "weighted"]):
    print("$ tiltgen", " ".join(argv))
    print("exit", run_command(argv))
