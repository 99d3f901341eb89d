"""The PTZ kinematic simulator.

Commands expand deterministically into frames: pan moves 5° per frame,
tilt 3° per frame, zoom and home are single frames, center interpolates
onto a target, and zoom_to frames an object at 80% of the tighter axis.
"""

from ptzbench import CameraState, Command, generate_scene, simulate, viewport_of

scene = generate_scene("parking", seed=3, object_count=5)
home = CameraState(0, 0, 1)

print("viewport at home:", viewport_of(home))
print("viewport at zoom 4x:", viewport_of(CameraState(0, 0, 4)))
print()

target = scene.objects[0]
commands = [
    Command("pan_right", (3,)),
    Command("hold", (2,)),
    Command("center", (target.id,)),
    Command("zoom_to", (target.id,)),
]
result = simulate(scene, home, commands)

print(f"{len(commands)} commands expanded into {len(result.frames)} frames:")
for ordinal, first, last in result.per_command_spans:
    name = commands[ordinal - 1].render()
    print(f"  command {ordinal} {name:24s} -> frames {first}..{last}")
print()

print("frame-by-frame camera states:")
for frame in result.frames:
    s = frame.state
    print(f"  frame {frame.index:2d}: pan {s.pan:8.3f}°  tilt {s.tilt:7.3f}°  zoom {s.zoom:6.3f}x")
print()

# motion clamps at the world limits but frames are still emitted
clamped = simulate(scene, CameraState(178, 0, 1), [Command("pan_right", (3,))])
print("pan_right(3) from pan=178° clamps:", [f.state.pan for f in clamped.frames])
