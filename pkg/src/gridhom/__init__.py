"""Grid diagrams, grid homology, and the combinatorics behind their stable homotopy refinements.

The package is organized in layers:

* ``gridcore``     -- grid diagrams, generators, domains, gradings
* ``signs``        -- sign assignments on rectangles and their axioms
* ``homalg``       -- finitely generated integer chain complexes, Smith normal form
* ``gridcomplex``  -- the grid complexes (plus / hat / tilde / plus-prime) and U-maps
* ``partitions``   -- ordered partitions (compositions) and their moves
* ``domainposet``  -- the generator poset, Bruhat order, witnesses, minima
* ``cdp``          -- the complexes of positive domains (with partitions)
* ``strata``       -- moduli stratification combinatorics, Z_N posets, permutohedra
* ``spectra``      -- cell bookkeeping and Hurewicz wedge decompositions
* ``cli``          -- command line front end
"""

from gridhom.gridcore import GridDiagram, Generator, GridDomain

__all__ = ["GridDiagram", "Generator", "GridDomain"]
