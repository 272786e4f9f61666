"""
Graph Corpus Manager
Generates, stores and reloads the random multigraphs and update streams
used by the experiments and tests.
"""

from pathlib import Path

import numpy as np
import pandas as pd

from graph_core import Graph, UpdateEvent, format_update_stream, parse_graph_file, parse_update_stream


def random_multigraph(n, m, seed, loops=True):
    """
    Random multigraph with m edges on n vertices

    Args:
        n: vertex count (>= 1, >= 2 when loops is False)
        m: edge count
        seed: generator seed
        loops: allow self-loops
    """
    if n < 1 or (not loops and n < 2):
        raise ValueError(f"Cannot place edges on {n} vertices")
    rng = np.random.default_rng(seed)
    g = Graph(n)
    while g.m < m:
        u, v = (int(x) for x in rng.integers(0, n, size=2))
        if u == v and not loops:
            continue
        g.add_edge(u, v)
    return g


def random_connected(n, m, seed):
    """Random loopless multigraph containing a random spanning tree"""
    if m < n - 1:
        raise ValueError(f"A connected graph on {n} vertices needs {n - 1} edges")
    rng = np.random.default_rng(seed)
    g = Graph(n)
    order = [int(x) for x in rng.permutation(n)]
    for i in range(1, n):
        g.add_edge(order[i], order[int(rng.integers(0, i))])
    while g.m < m:
        u, v = (int(x) for x in rng.integers(0, n, size=2))
        if u != v:
            g.add_edge(u, v)
    return g


def random_stream(n, steps, seed, p_delete=0.3, queries=False, m_max=None):
    """
    Random insert/delete stream that only deletes present edges

    Args:
        n: vertex count
        steps: number of update events
        p_delete: probability of a delete when an edge is present
        queries: append '? density' after every update
        m_max: never hold more edges than this
    """
    rng = np.random.default_rng(seed)
    present = []
    next_id = 0
    events = []
    for _ in range(steps):
        full = m_max is not None and len(present) >= m_max
        if present and (full or rng.random() < p_delete):
            eid = present.pop(int(rng.integers(0, len(present))))
            events.append(UpdateEvent.delete(eid))
        else:
            u, v = (int(x) for x in rng.integers(0, n, size=2))
            events.append(UpdateEvent.insert(u, v, next_id))
            present.append(next_id)
            next_id += 1
        if queries:
            events.append(UpdateEvent.query_density())
    return events


class GraphCorpus:
    """Seeded corpus of graphs and streams stored as text files"""

    def __init__(self, base_dir='corpus', verbose=False):
        self.base_dir = Path(base_dir)
        self.graph_dir = self.base_dir / 'graphs'
        self.stream_dir = self.base_dir / 'streams'
        self.verbose = verbose

    def _say(self, message):
        if self.verbose:
            print(message)

    def generate(self, count=50, seed=0, n_max=12, m_max=40, steps=200):
        """
        Write `count` random multigraphs and update streams

        Returns:
            list of generated names
        """
        self.graph_dir.mkdir(parents=True, exist_ok=True)
        self.stream_dir.mkdir(parents=True, exist_ok=True)
        rng = np.random.default_rng(seed)
        names = []
        for i in range(count):
            n = int(rng.integers(2, n_max + 1))
            m = int(rng.integers(1, m_max + 1))
            name = f"g{i:03d}"
            self.save_graph(name, random_multigraph(n, m, seed=seed * 1000 + i))
            self.save_stream(name, random_stream(n, steps, seed=seed * 1000 + i, m_max=m_max))
            names.append(name)
        self._say(f"[+] Generated {count} graphs and streams in {self.base_dir}")
        return names

    def save_graph(self, name, g):
        self.graph_dir.mkdir(parents=True, exist_ok=True)
        path = self.graph_dir / f"{name}.txt"
        path.write_text(g.to_text())
        return path

    def save_stream(self, name, events):
        self.stream_dir.mkdir(parents=True, exist_ok=True)
        path = self.stream_dir / f"{name}.stream"
        path.write_text(format_update_stream(events))
        return path

    def list_graphs(self):
        if not self.graph_dir.exists():
            self._say(f"[-] No corpus found at {self.base_dir}. Run generate() first.")
            return []
        return sorted(p.stem for p in self.graph_dir.glob('*.txt'))

    def load_graph(self, name):
        return parse_graph_file((self.graph_dir / f"{name}.txt").read_text())

    def load_stream(self, name):
        return parse_update_stream((self.stream_dir / f"{name}.stream").read_text())

    def load_all(self):
        """name -> Graph"""
        graphs = {name: self.load_graph(name) for name in self.list_graphs()}
        self._say(f"[+] Loaded {len(graphs)} graphs")
        return graphs

    def summary(self):
        """One row per stored graph"""
        rows = []
        for name, g in self.load_all().items():
            rows.append({
                'name': name,
                'n': g.n,
                'm': g.m,
                'loops': sum(1 for u, v in g.edges.values() if u == v),
                'is_forest': g.is_forest(),
            })
        return pd.DataFrame(rows, columns=['name', 'n', 'm', 'loops', 'is_forest'])


def main():
    """Generate the default corpus and print its summary"""
    corpus = GraphCorpus(verbose=True)
    corpus.generate()
    print("\n" + "=" * 50)
    print("Corpus Summary")
    print("=" * 50)
    print(corpus.summary().to_string(index=False))


if __name__ == '__main__':
    main()
