"""Pure-Python kernels.  ``_speedups.pyx`` mirrors these operation for operation."""

FNV_OFFSET = 2166136261
FNV_PRIME = 16777619


def trigram_buckets(token, n_buckets):
    """Hashed character-trigram buckets of ``<token>`` (FNV-1a over code points)."""
    padded = "<" + token + ">"
    out = []
    for k in range(len(padded) - 2):
        h = FNV_OFFSET
        for ch in padded[k:k + 3]:
            h ^= ord(ch)
            h = (h * FNV_PRIME) & 0xFFFFFFFF
        out.append(h % n_buckets)
    return out


def credit_sums(p_doc, p_start, p_end, p_tech, g_doc, g_start, g_end, g_tech, n_classes):
    """Per-class partial-credit numerators for precision and recall.

    Both span lists must be sorted by document index.  Pairs only interact
    inside the same document and with the same class.
    """
    p_doc, p_start, p_end, p_tech = map(list, (p_doc, p_start, p_end, p_tech))
    g_doc, g_start, g_end, g_tech = map(list, (g_doc, g_start, g_end, g_tech))
    prec = [0.0] * n_classes
    rec = [0.0] * n_classes
    n_p, n_g = len(p_doc), len(g_doc)
    i = j = 0
    while i < n_p:
        doc = p_doc[i]
        i_end = i
        while i_end < n_p and p_doc[i_end] == doc:
            i_end += 1
        while j < n_g and g_doc[j] < doc:
            j += 1
        j_end = j
        while j_end < n_g and g_doc[j_end] == doc:
            j_end += 1
        for a in range(i, i_end):
            s0, s1, c = p_start[a], p_end[a], p_tech[a]
            for b in range(j, j_end):
                if g_tech[b] != c:
                    continue
                t0, t1 = g_start[b], g_end[b]
                ov = min(s1, t1) - max(s0, t0)
                if ov > 0:
                    prec[c] += ov / (s1 - s0)
                    rec[c] += ov / (t1 - t0)
        i = i_end
    return prec, rec
