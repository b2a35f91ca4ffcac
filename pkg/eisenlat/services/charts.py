"""
eisenlat - Walk charts
PNG summaries of a neighbor walk: classes discovered per step and the
mu2 spread of what was found.
"""

import matplotlib
matplotlib.use('Agg')  # Headless mode - must be before pyplot import

import matplotlib.pyplot as plt
import numpy as np
from collections import Counter
from io import BytesIO

from eisenlat.services.neighbor import ClassStore

COLORS = {
    'bg_dark': '#000000',
    'bg_card': '#1C1C1E',
    'text_primary': '#FFFFFF',
    'text_secondary': '#8E8E93',
    'accent_green': '#34C759',
    'accent_orange': '#FF9F0A',
    'accent_blue': '#0A84FF',
    'accent_purple': '#BF5AF2',
    'grid': '#38383A',
}


def discovery_curve(store: ClassStore) -> np.ndarray:
    """Number of distinct classes seen after each step (index 0 is the start lattice)."""
    if not store.visits:
        return np.zeros(0, dtype=int)
    visits = np.asarray(store.visits)
    first_seen = np.zeros(len(visits), dtype=int)
    seen: set[int] = set()
    for i, idx in enumerate(visits):
        if idx not in seen:
            seen.add(int(idx))
            first_seen[i] = 1
    return np.cumsum(first_seen)


def discovery_chart(store: ClassStore, title: str | None = None) -> BytesIO:
    """Two panels: classes found vs step, and classes per mu2."""
    curve = discovery_curve(store)
    if curve.size == 0:
        return _generate_empty_chart("Empty walk")

    fig, (ax_walk, ax_mu) = plt.subplots(1, 2, figsize=(12, 5), facecolor=COLORS['bg_dark'],
                                         gridspec_kw={'width_ratios': [3, 2]})
    _setup_dark_style(ax_walk)
    _setup_dark_style(ax_mu)

    steps = np.arange(curve.size)
    ax_walk.plot(steps, curve, color=COLORS['accent_blue'], linewidth=2.0)
    ax_walk.fill_between(steps, curve, color=COLORS['accent_blue'], alpha=0.15)
    undecided = [c.first_step for c in store.classes if c.undecided]
    if undecided:
        ax_walk.scatter(undecided, curve[undecided], color=COLORS['accent_orange'], s=18, zorder=3,
                        label='isometry undecided')
        ax_walk.legend(facecolor=COLORS['bg_card'], labelcolor=COLORS['text_primary'], edgecolor=COLORS['grid'])
    ax_walk.set_xlabel('step', color=COLORS['text_secondary'])
    ax_walk.set_ylabel('classes', color=COLORS['text_secondary'])
    ax_walk.set_title(title or f'seed {store.seed}: {len(store)} classes in {curve.size - 1} steps',
                      color=COLORS['text_primary'], fontsize=12, fontweight='bold')
    if store.terminated_early:
        ax_walk.axvline(curve.size - 1, color=COLORS['accent_orange'], linestyle='--', alpha=0.7)

    by_mu2 = Counter(c.mu2 for c in store.classes)
    keys = sorted(by_mu2)
    colors = [COLORS['accent_purple'] if k == 0 else COLORS['accent_green'] for k in keys]
    ax_mu.bar([str(k) for k in keys], [by_mu2[k] for k in keys], color=colors, alpha=0.85)
    ax_mu.set_xlabel('mu2', color=COLORS['text_secondary'])
    ax_mu.set_ylabel('classes', color=COLORS['text_secondary'])
    ax_mu.tick_params(axis='x', labelrotation=60)

    plt.tight_layout()

    buf = BytesIO()
    fig.savefig(buf, format='png', dpi=150, bbox_inches='tight',
                facecolor=COLORS['bg_dark'], edgecolor='none')
    buf.seek(0)
    plt.close(fig)

    return buf


def _setup_dark_style(ax, show_grid=True):
    ax.set_facecolor(COLORS['bg_card'])
    ax.tick_params(colors=COLORS['text_secondary'], labelsize=9)
    ax.spines['top'].set_visible(False)
    ax.spines['right'].set_visible(False)
    ax.spines['bottom'].set_color(COLORS['grid'])
    ax.spines['left'].set_color(COLORS['grid'])
    if show_grid:
        ax.grid(True, color=COLORS['grid'], alpha=0.3, linestyle='-', linewidth=0.5)
    ax.set_axisbelow(True)


def _generate_empty_chart(message: str) -> BytesIO:
    fig, ax = plt.subplots(figsize=(10, 6), facecolor=COLORS['bg_dark'])
    ax.set_facecolor(COLORS['bg_dark'])
    ax.text(0.5, 0.5, message, ha='center', va='center',
            fontsize=16, color=COLORS['text_secondary'], fontweight='bold')
    ax.axis('off')

    buf = BytesIO()
    fig.savefig(buf, format='png', dpi=150, bbox_inches='tight',
                facecolor=COLORS['bg_dark'], edgecolor='none')
    buf.seek(0)
    plt.close(fig)

    return buf
