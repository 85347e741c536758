"""Internal unit system: time in fs, length in mm, angular frequency in rad/fs."""

#: speed of light [mm/fs]
C_MM_FS = 2.99792458e-4

#: speed of light [um/fs], convenient for Sellmeier formulas (wavelength in um)
C_UM_FS = 2.99792458e-1
