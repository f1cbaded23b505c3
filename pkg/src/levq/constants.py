"""Physical constants (CODATA 2018 exact/recommended values), SI units."""

E_CHARGE = 1.602176634e-19      # elementary charge (C), exact
HBAR = 1.054571817e-34          # reduced Planck constant (J s)
K_B = 1.380649e-23              # Boltzmann constant (J/K), exact
AMU = 1.66053906660e-27         # atomic mass unit (kg)

SILICON_DENSITY = 2329.0        # bulk silicon mass density (kg/m^3)
