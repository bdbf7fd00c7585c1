from outerspace.words import Word, cyclic_key


def cyclically_reduced_words(rank, max_len):
    """One representative per rotation+inversion class, length <= max_len."""
    gens = [i for i in range(1, rank + 1)] + [-i for i in range(1, rank + 1)]
    seen = set()
    out = []
    frontier = [()]
    for _ in range(max_len):
        new = []
        for seq in frontier:
            for x in gens:
                if seq and seq[-1] == -x:
                    continue
                new.append(seq + (x,))
        for seq in new:
            if seq[0] == -seq[-1] and len(seq) > 1:
                continue
            w = Word(seq, rank)
            key = cyclic_key(w)
            if key not in seen:
                seen.add(key)
                out.append(w)
        frontier = new
    return out
