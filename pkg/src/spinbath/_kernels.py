"""Hot loops of the Monte Carlo core.

The numba kernel fuses Knight-shifted phasor rotation with the analytic
transverse-field time integral in a single pass over the (shots,
macro-spins) arrays; a pure-numpy fallback keeps the package usable
without a working JIT.  Both are sequential and deterministic.
"""

from __future__ import annotations

import numpy as np

try:
    import numba

    @numba.njit(cache=True, fastmath=False)
    def _evolve_numba(amp_re, amp_im, omega, kw, sz, knight_rms, dt):
        m, n = amp_re.shape
        out = np.empty(m)
        for i in range(m):
            acc = 0.0
            s = 2.0 * knight_rms * sz[i]
            for j in range(n):
                eff = omega[i, j] + s * kw[j]
                ph = eff * dt
                c = np.cos(ph)
                si = np.sin(ph)
                re = amp_re[i, j]
                im = amp_im[i, j]
                nre = re * c - im * si
                nim = re * si + im * c
                if eff == 0.0:
                    acc += re * dt
                else:
                    acc += (nim - im) / eff
                amp_re[i, j] = nre
                amp_im[i, j] = nim
            out[i] = acc
        return out

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False


def _evolve_numpy(amp_re, amp_im, omega, kw, sz, knight_rms, dt):
    eff = omega + (2.0 * knight_rms) * sz[:, None] * kw[None, :]
    ph = eff * dt
    c = np.cos(ph)
    s = np.sin(ph)
    nre = amp_re * c - amp_im * s
    nim = amp_re * s + amp_im * c
    zero = eff == 0.0
    terms = np.divide(nim - amp_im, eff, out=np.zeros_like(eff), where=~zero)
    terms[zero] = (amp_re * dt * np.ones_like(eff))[zero]
    out = np.sum(terms, axis=-1)
    amp_re[:] = nre
    amp_im[:] = nim
    return out


def evolve_batch(amp_re, amp_im, omega, kw, sz, knight_rms, dt):
    """Rotate every phasor by its Knight-shifted phase over dt (in place)
    and return the per-shot integral of b_perp over the segment."""
    if HAVE_NUMBA:
        return _evolve_numba(amp_re, amp_im, omega, kw, sz, knight_rms, dt)
    return _evolve_numpy(amp_re, amp_im, omega, kw, sz, knight_rms, dt)


def fill_shot_draws(root_seed: int, start: int, count: int, n_bath: int,
                    n_norm: int, n_unif: int):
    """Per-shot stochastic inputs from counter-based Philox substreams.

    Shot k draws from Philox(key=root_seed, counter=k << 64): first the
    bath normals, then the sequence normals, then the uniforms.  Resets a
    single bit generator's counter per shot, which is bit-identical to
    constructing a fresh generator per shot but much faster.
    """
    bg = np.random.Philox(key=root_seed)
    template = bg.state
    counter = template["state"]["counter"]
    rng = np.random.Generator(bg)
    z = np.empty((count, n_bath))
    normals = np.empty((count, n_norm))
    uniforms = np.empty((count, n_unif))
    for i in range(count):
        counter[1] = start + i
        bg.state = template
        z[i] = rng.standard_normal(n_bath)
        if n_norm:
            normals[i] = rng.standard_normal(n_norm)
        if n_unif:
            uniforms[i] = rng.random(n_unif)
    return z, normals, uniforms
