import numpy as np

def backward_induction(p: np.ndarray, R: np.ndarray) -> np.ndarray: ...
def deterministic_values(p: np.ndarray, R: np.ndarray) -> np.ndarray: ...
def simulate_chunk(p: np.ndarray, pi: np.ndarray, R: np.ndarray, u: np.ndarray, v: np.ndarray) -> np.ndarray: ...
