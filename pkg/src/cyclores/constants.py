"""Physical constants in CGS-Gaussian units (CODATA 2018).

Every public quantity in this package is expressed in CGS-Gaussian
units: lengths in cm, energies in erg, magnetic fields in gauss,
charges in statcoulomb.  The vector-potential amplitudes carried by
pulse envelopes are therefore in gauss*cm.
"""

C_LIGHT = 2.99792458e10  # speed of light, cm/s (exact)
HBAR = 1.054571817e-27  # reduced Planck constant, erg*s
E_CHARGE = 4.80320471257026372e-10  # elementary charge, statC (esu)
M_ELECTRON = 9.1093837015e-28  # electron mass, g
M_PROTON = 1.67262192369e-24  # proton mass, g

ERG_PER_EV = 1.602176634e-12  # conversion: 1 eV in erg (exact)
