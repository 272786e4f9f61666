"""
Packing Lab Web App
Streamlit interface for convergence curves, ladder tiles and the dynamic
density estimator
"""

import streamlit as st
import pandas as pd

from corpus import GraphCorpus, random_connected, random_stream
from density import EstimatorConfig, MultiScaleDensity
from graph_core import Graph, apply_update, parse_graph_file
from ideal import densest_exact
from lab import convergence_curves, ladder_curves, ladder_tile_trace, records_frame
from ladder import tile_step_check
from packing import BICIRCULAR

# Page configuration
st.set_page_config(
    page_title="Greedy Packing Lab",
    page_icon="🌲",
    layout="wide"
)

st.markdown("# 🌲 Greedy Packing Lab")
st.markdown("### Greedy base packings, ideal loads and dynamic density estimates")


@st.cache_data
def load_corpus(base_dir):
    corpus = GraphCorpus(base_dir)
    return {name: corpus.load_graph(name).to_text() for name in corpus.list_graphs()}


tab_converge, tab_tiles, tab_density = st.tabs(["Convergence", "Ladder tiles", "Density"])

with tab_converge:
    source = st.radio("Graph:", ["Ladder", "Random connected", "Corpus"], horizontal=True)
    k_max = st.slider("Packing steps k", 10, 2000, 300, step=10)
    every = st.slider("Record every", 1, 50, 5)
    ks = range(every, k_max + 1, every)

    try:
        if source == "Ladder":
            col1, col2 = st.columns(2)
            with col1:
                d = st.number_input("Columns d", 2, 200, 30)
            with col2:
                w = st.number_input("Multiplicity w", 1, 5, 1)
            records = ladder_curves(int(d), k_max, w=int(w), ks=ks)
        elif source == "Random connected":
            col1, col2, col3 = st.columns(3)
            with col1:
                n = st.number_input("Vertices", 3, 14, 8)
            with col2:
                m = st.number_input("Edges", int(n) - 1, 40, 16)
            with col3:
                seed = st.number_input("Seed", 0, 10_000, 0)
            records = convergence_curves(random_connected(int(n), int(m), int(seed)), k_max, ks=ks)
        else:
            base_dir = st.text_input("Corpus directory", "corpus")
            graphs = load_corpus(base_dir)
            if not graphs:
                st.warning("No corpus found. Run `python corpus.py` first.")
                st.stop()
            name = st.selectbox("Corpus graph:", sorted(graphs))
            records = convergence_curves(parse_graph_file(graphs[name]), k_max, ks=ks)

        frame = records_frame(records).set_index('k')
        st.line_chart(frame[['err_inf', 'thorup']])
        st.line_chart(frame[['err_2', 'bound2']])
        broken = [r for r in records if r.violations()]
        if broken:
            st.error(f"[-] {len(broken)} records break a bound")
        else:
            st.success(f"[+] All {len(records)} records within their bounds")
    except Exception as e:
        st.error(f"Error: {str(e)}")

with tab_tiles:
    d = st.number_input("Ladder columns d", 8, 60, 30, key="tile_d")
    k_hi = st.number_input("Last k", 54, max(int(d) * int(d) // 4, 54), 96)
    if st.button("Decode tiles", type="primary"):
        with st.spinner("Packing spanning trees..."):
            try:
                trace = ladder_tile_trace(int(d), 54, int(k_hi))
                rows = []
                for prev, nxt in zip(trace, trace[1:] + [None]):
                    ok = '' if nxt is None else ('[+]' if tile_step_check(prev, nxt).ok else '[-]')
                    rows.append({'k': prev.k, 'tiles': str(prev), 'residual': prev.residual,
                                 'next step': ok})
                st.table(pd.DataFrame(rows))
            except Exception as e:
                st.error(f"Error: {str(e)}")

with tab_density:
    col1, col2, col3 = st.columns(3)
    with col1:
        n = st.number_input("Vertices", 2, 12, 6, key="dens_n")
    with col2:
        steps = st.number_input("Updates", 5, 200, 40)
    with col3:
        seed = st.number_input("Seed", 0, 10_000, 1, key="dens_seed")
    eps = st.select_slider("eps", options=[0.25, 0.5, 1.0], value=1.0)

    if st.button("Run stream", type="primary"):
        events = random_stream(int(n), int(steps), int(seed), m_max=12)
        config = EstimatorConfig(eps, rho_max=8, c_k=2, c_coarse=2, edge_cap=12)
        with st.spinner("Maintaining packings..."):
            est = MultiScaleDensity(int(n), config)
            shadow = Graph(int(n))
            rows = []
            for i, ev in enumerate(events):
                est.density_update(ev)
                apply_update(shadow, ev)
                report = est.density_query(i)
                oracle = densest_exact(shadow, BICIRCULAR).ratio if shadow.m else 0
                rows.append({'update': i, 'estimate': float(report.estimate),
                             'oracle': float(oracle)})
        st.line_chart(pd.DataFrame(rows).set_index('update'))

    with st.expander("ℹ️ About"):
        st.markdown("""
        **Density** is the largest ratio |E(S)| / |S| over vertex sets. The estimator keeps
        stacked minimum-weight pseudoforests at several density scales and reports
        k divided by the smallest number of layers any edge belongs to.
        The oracle line is the exact value by subset enumeration.
        """)

# Footer
st.markdown("---")
st.markdown("""
<div style='text-align: center; color: #666;'>
    <p>Greedy Packing Lab | graphic and bicircular matroids</p>
</div>
""", unsafe_allow_html=True)
