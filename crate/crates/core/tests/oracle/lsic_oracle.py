"""Independent reference model used to freeze the known-answer values in the
Rust test suites. Written directly from the algorithm descriptions with numpy;
shares no code with the Rust crate.

Run: python3 lsic_oracle.py
"""
import hashlib
import struct

import numpy as np

MASK = (1 << 64) - 1
A = 6364136223846793005
C = 1442695040888963407


def prng(s):
    return (A * s + C) & MASK


def sort_map(q):
    return list(np.argsort(np.asarray(q), kind="stable"))


def lsg(q1, q2):
    seed = sort_map(q1)
    shift = sort_map(q2)
    n = len(seed)
    return np.array([[seed[(c + shift[r]) % n] for c in range(n)] for r in range(n)], dtype=np.int64)


def kdsg(key, m):
    out = []
    k = key
    for _ in range(m + 1):
        subs = struct.unpack(">8I", k)
        streams = []
        for s in subs:
            q = [prng(s)]
            for _ in range(63):
                q.append(prng(q[-1]))
            streams.append(q)
        q1 = sum((q[:32] for q in streams), [])
        q2 = sum((q[32:] for q in streams), [])
        out.append((q1, q2))
        k = b"".join(struct.pack(">I", q[63] & 0xFFFFFFFF) for q in streams)
    return out


def schedule(key):
    return [lsg(q1, q2) for q1, q2 in kdsg(key, 8)]


def sr(x, d):
    return [x, x[::-1, :], x[:, ::-1]][d]


def whiten(L, P):
    return sr(P, int(L[0, 0]) % 3) ^ L


def lsrs(L, P):
    n = L.shape[0]
    C = np.zeros_like(P)
    for c in range(n):
        prev = 0
        for r in range(n):
            C[r, c] = L[prev, P[r, c]]
            prev = C[r, c]
    return C


def lscs(L, P):
    n = L.shape[0]
    C = np.zeros_like(P)
    for r in range(n):
        prev = 0
        for c in range(n):
            C[r, c] = L[P[r, c], prev]
            prev = C[r, c]
    return C


def lsp(L, P):
    n = L.shape[0]
    rows = np.arange(n)[:, None]
    cols = np.arange(n)[None, :]
    star = P[rows, L]          # C*(r,c) = P(r, L(r,c))
    return star[L, cols]       # C(r,c) = C*(L(r,c), c)


def encrypt_block(P, sched):
    X = P.astype(np.int64)
    for n in range(8):
        L = sched[n]
        X = whiten(L, X)
        X = lscs(L, X) if n % 2 else lsrs(L, X)
        X = lsp(L, X)
    return whiten(sched[8], X)


def main():
    print("prng(0) =", prng(0))
    print("prng(prng(0)) =", prng(prng(0)))

    L4 = lsg([.1, .6, .9, .7], [.3, .9, .4, .2])
    print("L4 =", L4.tolist())
    print("lscs(L4, zeros row) =", lscs(L4, np.zeros((4, 4), dtype=np.int64)).tolist())
    P = np.array([[0, 1, 2, 3], [3, 2, 1, 0], [1, 1, 1, 1], [2, 0, 3, 1]])
    print("lscs(L4, P) =", lscs(L4, P).tolist())
    print("lsrs(L4, P) =", lsrs(L4, P).tolist())
    print("lsp(L4, P) =", lsp(L4, P).tolist())

    zero = bytes(32)
    (q1, q2), = kdsg(zero, 0)
    blob = b"".join(struct.pack(">Q", v) for v in q1 + q2)
    print("kdsg(zero,0) q1[0..3] =", q1[:3], "q2[0] =", q2[0])
    print("kdsg(zero,0) sha256 =", hashlib.sha256(blob).hexdigest())

    sched = schedule(zero)
    print("zero key D =", [int(L[0, 0]) for L in sched])
    print("zero key L0 row0[0..8] =", sched[0][0, :8].tolist())

    ramp = np.add.outer(np.arange(256), np.arange(256)) % 256
    ct = encrypt_block(ramp, sched).astype(np.uint8)
    container = b"LSIC" + bytes([1, 0, 1, 0]) + struct.pack(">II", 256, 256) + ct.tobytes()
    print("container len =", len(container))
    print("container sha256 =", hashlib.sha256(container).hexdigest())
    print("ct[0,0..8] =", ct[0, :8].tolist())

    key = bytes.fromhex("000102030405060708090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f")
    sched2 = schedule(key)
    ct2 = encrypt_block(ramp, sched2).astype(np.uint8)
    print("sequential key ct sha256 =", hashlib.sha256(ct2.tobytes()).hexdigest())

    d = np.abs(np.subtract.outer(np.arange(256), np.arange(256)))
    print("ideal uaci (S=255) =", 100 * d.mean() / 255)
    print("ideal npcr =", 100 * (1 - 1 / 256))


if __name__ == "__main__":
    main()
