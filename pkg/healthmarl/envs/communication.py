import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order
from scipy.spatial.distance import cdist

from .particle import ParticleWorld


def communication_reward(terminals, positions, alive, comm_radius):
    ''' 1.0 when a breadth-first search from the first terminal reaches the
    second through live relays at most `comm_radius` apart, else 0.0.
    '''
    live = np.asarray(positions, dtype=float)[np.asarray(alive, dtype=bool)]
    vertices = np.vstack([np.asarray(terminals, dtype=float), live.reshape(-1, 2)])
    adjacency = cdist(vertices, vertices) <= comm_radius
    np.fill_diagonal(adjacency, False)
    reached = breadth_first_order(csr_matrix(adjacency), 0, directed=False,
                                  return_predecessors=False)
    return 1.0 if 1 in reached else 0.0


class HazardousCommunication(ParticleWorld):
    ''' Two fixed terminals to be linked by a chain of mobile relays. A hazard
    is placed between the terminals at the start of every episode.
    '''

    def _landmark_count(self):
        return 2

    @property
    def terminals(self):
        return np.asarray(self.config.terminals, dtype=float)

    @property
    def comm_radius(self):
        if self.config.comm_radius is not None:
            return self.config.comm_radius
        separation = np.linalg.norm(self.terminals[1] - self.terminals[0])
        return 2.0 * separation / (self.n_agents + 1)

    def _place_landmarks(self, rng):
        return np.array(self.terminals)

    def _place_hazard(self, rng, landmarks):
        # central 80% of the gap in x, straddling the terminal line in y
        u, v = rng.random(2)
        x_low, x_high = np.sort(landmarks[:, 0])
        x = x_low + (x_high - x_low) * (0.1 + 0.8 * u)
        y = np.mean(landmarks[:, 1]) + self.config.hazard_radius * (2.0 * v - 1.0)
        if not self.config.hazard:
            return np.zeros(2)
        return np.array([x, y])

    def reward(self, state):
        view = self.unpack(state.nonhealth)
        return communication_reward(view.landmarks, view.positions,
                                    state.health.values > 0.0, self.comm_radius)
