"""Physical constants and default parameters for the rotating-NV magnetometer model.

All frequencies are cycles per second (Hz), all gyromagnetic ratios are
cycles per second per tesla.  Phase integrals multiply by 2*pi explicitly.
"""

D_ZFS = 2.87e9              # Hz, NV ground-state zero-field splitting
GAMMA_E = 28e9              # Hz/T, electron gyromagnetic ratio
GAMMA_C13 = 10.7e6          # Hz/T, 13C nuclear gyromagnetic ratio
HYPERFINE_14N = 2.16e6      # Hz, 14N hyperfine splitting of the NV lines

# Transverse-field bound below which the linearized Zeeman shift is trusted.
LINEAR_FIELD_BOUND = 0.5e-3  # T

THETA_NV_111 = 0.06632251157578453   # rad, 3.8 deg: (111)-cut sample cone angle
THETA_NV_100 = 0.9547197554556897    # rad, 54.7 deg: (100)-cut sample cone angle
