"""The command DSL parser.

The parser pulls commands out of free-form model text (prose, fences,
list markers), validates names, arities, ranges, and object references
against the scene, and reports every violation as a diagnostic.
"""

from ptzbench import generate_scene, parse_response, serialize
from ptzbench.commands import api_docs

scene = generate_scene("construction", seed=7, object_count=5)
print("objects in scene:", ", ".join(sorted(scene.object_ids())))
print()

print("the API table shown to models:")
for doc in api_docs():
    print(f"  {doc.signature:22s} {doc.description} ({doc.param_ranges})")
print()

chatty = "Sure! First zoom(3.5), then pan_right(3). That should do it."
outcome = parse_response(chatty, scene)
print(f"chatty response -> accepted={outcome.accepted}, commands={[c.render() for c in outcome.commands]}")

bad = "zoom(40)\ncenter(car_9)\nwarp_to(excavator_1)"
outcome = parse_response(bad, scene)
print(f"bad response -> accepted={outcome.accepted}")
for diag in outcome.diagnostics:
    print(f"  at {diag.position:3d}: {diag.kind:18s} {diag.text}")
print()

prose = "The camera should slowly look around the site."
print("pure prose ->", parse_response(prose, scene).diagnostic_kinds())
print()

# canonical text round-trips exactly
commands = outcome.commands
text = serialize(parse_response("pan_left(4) hold(2) home()", scene).commands)
print("canonical form:")
print(text)
assert parse_response(text, scene).commands == parse_response("pan_left(4) hold(2) home()", scene).commands
print("round-trip: parse(serialize(x)) == x")
