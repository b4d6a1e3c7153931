"""Scratch: derive frozen expected values for distance fixtures via the naive oracle."""

import math
import sys
from collections import Counter

sys.path.insert(0, "tests")
from naive_align import naive_global, naive_local_distance, naive_local_score


def music_cost(a, b):
    if a == b:
        return 0.0
    diff = abs(a - b)
    if diff in (3, 4) or diff == 7:
        return 1.0
    return 1.3 ** (diff / 4)


def bag_distance(a, b):
    tokens = set(a) | set(b)
    union = sum(max(a[t], b[t]) for t in tokens)
    if union == 0:
        return 0.0
    sym = sum(abs(a[t] - b[t]) for t in tokens)
    return sym / union


def music_bags(pitches, durations):
    pitch = Counter(pitches)
    pclass = Counter(p % 12 for p in pitches)
    interval = Counter(abs(b - a) for a, b in zip(pitches, pitches[1:]))
    step = Counter(b - a for a, b in zip(pitches, pitches[1:]))
    rhythm = Counter(zip(durations, durations[1:]))
    return pitch, pclass, interval, step, rhythm


def music_distance(p1, d1, p2, d2):
    g = naive_global(p1, p2, music_cost, 1.5)
    l = naive_local_distance(p1, p2, music_cost, 1.5, 1.5)
    b1 = music_bags(p1, d1)
    b2 = music_bags(p2, d2)
    # order: rhythm, interval, step, pitch, pitch-class
    sb = (bag_distance(b1[4], b2[4]) ** 2 + bag_distance(b1[2], b2[2]) ** 2
          + bag_distance(b1[3], b2[3]) ** 2 + bag_distance(b1[0], b2[0]) ** 2
          + bag_distance(b1[1], b2[1]) ** 2)
    sa = g * g + 2.0 * l * l
    return math.sqrt(10.0 * sb + sa), g, l, sb


A = ([60, 64], [1.0, 1.0])
C = ([62, 65], [1.0, 1.0])
OCT = ([72, 76], [1.0, 1.0])

for name, x, y in [("A vs A", A, A), ("A vs C", A, C), ("A vs octave", A, OCT)]:
    d, g, l, sb = music_distance(x[0], x[1], y[0], y[1])
    print(f"{name}: distance={d!r} global={g!r} local={l!r} score_bag={sb!r}")

print("single [60] vs [60] local:", naive_local_distance([60], [60], music_cost, 1.5, 1.5),
      "H*:", naive_local_score([60], [60], music_cost, 1.5, 1.5))
print("[60,64] selflocal:", naive_local_distance([60, 64], [60, 64], music_cost, 1.5, 1.5))
print("cost(60,66):", music_cost(60, 66))

# --- trajectory fixture ---------------------------------------------------

def pt_cost(p, q):
    return math.hypot(p[0] - q[0], p[1] - q[1])


def traj_features(points, resolution=5.0):
    moves = [(points[i + 1][0] - points[i][0], points[i + 1][1] - points[i][1])
             for i in range(len(points) - 1)]
    bag = Counter()
    for m1, m2 in zip(moves, moves[1:]):
        l1 = math.hypot(*m1)
        l2 = math.hypot(*m2)
        if l1 == 0.0 or l2 == 0.0:
            continue
        cross = m1[0] * m2[1] - m1[1] * m2[0]
        dot = m1[0] * m2[0] + m1[1] * m2[1]
        deg = -math.degrees(math.atan2(cross, dot))
        if deg <= -180.0:
            deg += 360.0
        if -30 < deg <= 30:
            b = "forward"
        elif 30 < deg <= 90:
            b = "upper_right"
        elif 90 < deg <= 150:
            b = "lower_right"
        elif -90 < deg <= -30:
            b = "upper_left"
        elif -150 < deg <= -90:
            b = "lower_left"
        else:
            b = "backward"
        q = math.floor(l1 / resolution + 0.5) * resolution
        bag[(q, b)] += 1
    total = sum(math.hypot(*m) for m in moves)
    disp = (points[-1][0] - points[0][0], points[-1][1] - points[0][1])
    net = 0.0 if disp == (0.0, 0.0) else math.atan2(disp[1], disp[0])
    return bag, total, net


def traj_distance(a, b):
    g = naive_global(a, b, pt_cost, 100.0)
    l = naive_local_distance(a, b, pt_cost, 100.0, 100.0)
    ba, ta, na = traj_features(a)
    bb, tb, nb = traj_features(b)
    sbag = bag_distance(ba, bb) ** 2
    dd = abs(ta - tb)
    dang = abs(na - nb)
    if dang > math.pi:
        dang = 2 * math.pi - dang
    overall = dd * dd + (10.0 * dang) ** 2
    return math.sqrt(100.0 * sbag + g * g + 2.5 * l * l) + overall, g, l, overall


worked = [(0, 0), (0, 10), (5, 10), (8, 14)]
print("worked example bag:", sorted(traj_features(worked)[0].items()))
print("straight line bag:", sorted(traj_features([(0, 0), (5, 0), (10, 0)])[0].items()))

T1 = [(0.0, 0.0), (3.0, 4.0)]
T2 = [(0.0, 0.0), (0.0, 0.0)]
d, g, l, ov = traj_distance(T1, T2)
print(f"T1 vs T2: distance={d!r} global={g!r} local={l!r} overall={ov!r}")

ident = [(float(i), float(i % 3)) for i in range(10)]
d, g, l, ov = traj_distance(ident, ident)
print(f"identity 10pt: distance={d!r}")

# --- triangle inequality violation witness --------------------------------
# Prefix of distinct pitch classes outside {0, 4, 11}; final block of two
# repeated notes at 60 / 64 / 71 so cost(60,71)=1.3^2.75 > cost(60,64)+cost(64,71)=2.
prefix = []
base = [61, 62, 63, 65, 66, 67, 68, 69, 70]
for k in range(60):
    prefix.append(base[k % len(base)] - 12 * ((k // len(base)) % 2))
durs = [1.0] * (len(prefix) + 2)
sa = prefix + [60, 60]
sb = prefix + [64, 64]
sc = prefix + [71, 71]
dab = music_distance(sa, durs, sb, durs)[0]
dbc = music_distance(sb, durs, sc, durs)[0]
dac = music_distance(sa, durs, sc, durs)[0]
print(f"witness: d(a,b)={dab!r} d(b,c)={dbc!r} d(a,c)={dac!r} violation={dac > dab + dbc}")
print("witness prefix:", prefix)
