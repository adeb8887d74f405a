"""Independent reference for the key pipeline (SplitMix64 + descending
Fisher-Yates) and the 4x4 cipher example. Used to freeze golden values in
test_keys.cpp / test_cipher.cpp; not part of the build."""
import hashlib
import math

MASK = (1 << 64) - 1


def splitmix64(state):
    state = (state + 0x9E3779B97F4A7C15) & MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return z ^ (z >> 31), state


def fisher_yates(n, state):
    p = list(range(n))
    for i in range(n - 1, 0, -1):
        v, state = splitmix64(state)
        j = v % (i + 1)
        p[i], p[j] = p[j], p[i]
    return p, state


def generate_key(seed, m, h, w):
    k1, s = fisher_yates((h // m) * (w // m), seed)
    k2, _ = fisher_yates((m // 2) ** 2, s)
    return k1, k2


def key_text(seed, m, h, w):
    k1, k2 = generate_key(seed, m, h, w)
    return (f"VITCRYPT-KEY 1\nM={m} H={h} W={w}\n"
            f"K1={','.join(map(str, k1))}\nK2={','.join(map(str, k2))}\n")


def fnv1a64(data):
    h = 0xCBF29CE484222325
    for b in data:
        h = ((h ^ b) * 0x100000001B3) & MASK
    return h


if __name__ == "__main__":
    print("splitmix seed0 first", hex(splitmix64(0)[0]))
    print("splitmix seed1 first", hex(splitmix64(1)[0]))
    s, vals = 0, []
    for _ in range(3):
        v, s = splitmix64(s)
        vals.append(hex(v))
    print("splitmix seed0 first3", vals)
    print("fy n=4 seed0", fisher_yates(4, 0)[0])
    print("fy n=10 seed7", fisher_yates(10, 7)[0])
    k1, k2 = generate_key(42, 16, 224, 224)
    print("key42 K1[:8]", k1[:8])
    print("key42 K2", k2)
    t = key_text(42, 16, 224, 224).encode()
    print("key42 text fnv1a64", hex(fnv1a64(t)), len(t))
    print("key seed1 M4 8x8", generate_key(1, 4, 8, 8))

    # 4x4 gray 0..15, M=2, K1=[2,0,3,1], K2 trivially identity (S=1).
    img = [[r * 4 + c for c in range(4)] for r in range(4)]
    blocks = []
    for br in range(2):
        for bc in range(2):
            blocks.append([img[br * 2 + y][bc * 2 + x] for y in range(2) for x in range(2)])
    k1 = [2, 0, 3, 1]
    out_blocks = [blocks[k1[i]] for i in range(4)]
    out = [[0] * 4 for _ in range(4)]
    for i, b in enumerate(out_blocks):
        br, bc = divmod(i, 2)
        for p, v in enumerate(b):
            out[br * 2 + p // 2][bc * 2 + p % 2] = v
    print("encrypt 4x4", out)

    print("64!", math.factorial(64))
    ks = math.factorial(196) * math.factorial(64)
    print("keyspace 16/224 bitlen", ks.bit_length(), "log2", math.log2(ks))
    print("256! log2", math.lgamma(257) / math.log(2), "bitlen", math.factorial(256).bit_length())
    print("keyspace 16/224 decimal digits", len(str(ks)), str(ks)[:20], str(ks)[-5:])
