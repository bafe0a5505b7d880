"""Addressable binary heap for the repair loop.

Entries are [k1, k2, vid] lists compared lexicographically, so equal keys
break ties toward the smallest vertex id and pops are fully deterministic.
A position index supports O(log n) update and remove by vertex id; heapq
cannot do that without lazy deletion, which would make queue scans lie.
"""

INF = float("inf")
TOP_EMPTY = (INF, INF)


class RepairQueue:
    __slots__ = ("_heap", "_pos")

    def __init__(self):
        self._heap = []
        self._pos = {}

    def __len__(self):
        return len(self._heap)

    def __contains__(self, vid):
        return vid in self._pos

    def top_key(self):
        """Smallest key, or (inf, inf) when empty."""
        if not self._heap:
            return TOP_EMPTY
        e = self._heap[0]
        return (e[0], e[1])

    def insert(self, vid, key):
        if vid in self._pos:
            raise KeyError(f"vertex {vid} already queued")
        entry = [key[0], key[1], vid]
        self._heap.append(entry)
        self._pos[vid] = len(self._heap) - 1
        self._sift_up(len(self._heap) - 1)

    def update(self, vid, key):
        i = self._pos[vid]
        entry = self._heap[i]
        old = (entry[0], entry[1])
        entry[0], entry[1] = key[0], key[1]
        if key < old:
            self._sift_up(i)
        else:
            self._sift_down(i)

    def remove(self, vid):
        i = self._pos.pop(vid)
        last = self._heap.pop()
        if i < len(self._heap):
            self._heap[i] = last
            self._pos[last[2]] = i
            self._sift_down(i)
            self._sift_up(i)

    def pop(self):
        """Remove and return (key, vid) with the smallest (key, vid)."""
        e = self._heap[0]
        vid = e[2]
        self.remove(vid)
        return (e[0], e[1]), vid

    def key_of(self, vid):
        e = self._heap[self._pos[vid]]
        return (e[0], e[1])

    def items(self):
        """(vid, key) pairs in arbitrary order; for invariant scans."""
        return [(e[2], (e[0], e[1])) for e in self._heap]

    def _sift_up(self, i):
        heap = self._heap
        pos = self._pos
        entry = heap[i]
        while i > 0:
            parent = (i - 1) >> 1
            p = heap[parent]
            if entry < p:
                heap[i] = p
                pos[p[2]] = i
                i = parent
            else:
                break
        heap[i] = entry
        pos[entry[2]] = i

    def _sift_down(self, i):
        heap = self._heap
        pos = self._pos
        n = len(heap)
        entry = heap[i]
        while True:
            child = 2 * i + 1
            if child >= n:
                break
            right = child + 1
            if right < n and heap[right] < heap[child]:
                child = right
            c = heap[child]
            if c < entry:
                heap[i] = c
                pos[c[2]] = i
                i = child
            else:
                break
        heap[i] = entry
        pos[entry[2]] = i
