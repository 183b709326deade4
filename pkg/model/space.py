from __future__ import annotations

import threading

import numpy as np
import numpy.typing as npt

from model.errors import DimensionError, HermiticityError
from model.settings import DEFAULT_SETTINGS


class JointSpace:
    def __init__(self, n_system_qubits: int, bath_dimension: int = 1,
                 dimension_cap: int | None = None):
        """Faktorisierter Hilbertraum H_S ⊗ H_B.

        Parameters
        ----------
        n_system_qubits : int
            Anzahl Systemqubits n.
        bath_dimension : int
            Dimension des Bades (2^{n_B} für Spin-Bäder, sonst beliebig ≥ 1).
        dimension_cap : int | None
            Obergrenze für 2^n · bath_dimension, Standard aus den Settings.
        """
        assert n_system_qubits >= 0, "Anzahl Systemqubits darf nicht negativ sein."
        assert bath_dimension >= 1, "Baddimension muss mindestens 1 sein."
        cap = DEFAULT_SETTINGS.dimension_cap if dimension_cap is None else dimension_cap
        total = (2 ** n_system_qubits) * bath_dimension
        if total > cap:
            raise DimensionError(f"Gesamtdimension {total} überschreitet die Grenze {cap}.")
        self._n = int(n_system_qubits)
        self._bath_dimension = int(bath_dimension)

    @property
    def n_system_qubits(self) -> int:
        return self._n

    @property
    def bath_dimension(self) -> int:
        return self._bath_dimension

    @property
    def system_dimension(self) -> int:
        return 2 ** self._n

    @property
    def total_dimension(self) -> int:
        return self.system_dimension * self._bath_dimension

    def __eq__(self, other) -> bool:
        if not isinstance(other, JointSpace):
            return NotImplemented
        return self._n == other._n and self._bath_dimension == other._bath_dimension

    def __hash__(self) -> int:
        return hash((self._n, self._bath_dimension))

    def __str__(self) -> str:
        return f"JointSpace(n={self._n}, d_B={self._bath_dimension}, dim={self.total_dimension})"

    def __repr__(self) -> str:
        return self.__str__()


class DenseOperator:
    def __init__(self, matrix: npt.ArrayLike, space: JointSpace,
                 hermitian: bool = False, unitary: bool = False,
                 tolerance: float | None = None):
        """Unveränderlicher dichter Operator auf einem JointSpace.

        Parameters
        ----------
        matrix : array_like
            Quadratische Matrix der Dimension space.total_dimension.
        space : JointSpace
            Der zugehörige Raum.
        hermitian, unitary : bool
            Gesetzte Flags werden beim Erstellen numerisch geprüft.
        tolerance : float | None
            Toleranz der Prüfung, Standard hermitian_tol bzw. unitary_tol.
        """
        m = np.array(matrix, dtype=complex)
        d = space.total_dimension
        if m.shape != (d, d):
            raise DimensionError(f"Matrix hat Form {m.shape}, erwartet ({d}, {d}).")

        if hermitian:
            tol = DEFAULT_SETTINGS.hermitian_tol if tolerance is None else tolerance
            residual = np.max(np.abs(m - m.conj().T)) if d else 0.0
            if residual > tol * max(1.0, np.max(np.abs(m)) if d else 1.0):
                raise HermiticityError(f"Operator ist nicht hermitesch (Residuum {residual:.2e}).")
            m = 0.5 * (m + m.conj().T)
        if unitary:
            tol = DEFAULT_SETTINGS.unitary_tol if tolerance is None else tolerance
            residual = np.linalg.norm(m.conj().T @ m - np.eye(d), 2)
            if residual > tol:
                raise HermiticityError(f"Operator ist nicht unitär (Residuum {residual:.2e}).")

        m.setflags(write=False)
        self.matrix = m
        self.space = space
        self.hermitian = hermitian
        self.unitary = unitary
        # Spektralzerlegung wird pro Operator (nicht pro Dauer) einmal berechnet
        self._spectrum: tuple[npt.NDArray[np.float64], npt.NDArray[np.complex128]] | None = None
        self._lock = threading.Lock()

    @classmethod
    def zeros(cls, space: JointSpace) -> DenseOperator:
        d = space.total_dimension
        return cls(np.zeros((d, d)), space, hermitian=True)

    @classmethod
    def identity(cls, space: JointSpace) -> DenseOperator:
        return cls(np.eye(space.total_dimension), space, hermitian=True, unitary=True)

    def spectrum(self) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.complex128]]:
        """Eigenwerte und Eigenvektoren eines hermiteschen Operators (gecacht).

        Returns
        -------
        tuple
            (w, V) mit matrix = V diag(w) V†.
        """
        if not self.hermitian:
            raise HermiticityError("Spektralzerlegung nur für hermitesche Operatoren.")
        cached = self._spectrum
        if cached is not None:
            return cached
        with self._lock:
            if self._spectrum is None:
                w, v = np.linalg.eigh(self.matrix)
                w.setflags(write=False)
                v.setflags(write=False)
                self._spectrum = (w, v)
            return self._spectrum

    def _check_space(self, other: DenseOperator) -> None:
        if other.space != self.space:
            raise DimensionError(f"Operatoren leben auf verschiedenen Räumen: {self.space} vs {other.space}.")

    def __add__(self, other: DenseOperator) -> DenseOperator:
        self._check_space(other)
        return DenseOperator(self.matrix + other.matrix, self.space,
                             hermitian=self.hermitian and other.hermitian)

    def __sub__(self, other: DenseOperator) -> DenseOperator:
        self._check_space(other)
        return DenseOperator(self.matrix - other.matrix, self.space,
                             hermitian=self.hermitian and other.hermitian)

    def __matmul__(self, other: DenseOperator) -> DenseOperator:
        self._check_space(other)
        return DenseOperator(self.matrix @ other.matrix, self.space,
                             unitary=self.unitary and other.unitary)

    def __mul__(self, scalar: complex) -> DenseOperator:
        scalar = complex(scalar)
        keep_hermitian = self.hermitian and scalar.imag == 0.0
        return DenseOperator(self.matrix * scalar, self.space, hermitian=keep_hermitian)

    __rmul__ = __mul__

    def __neg__(self) -> DenseOperator:
        return self * -1.0

    def __str__(self) -> str:
        flags = "".join(f for f, on in (("H", self.hermitian), ("U", self.unitary)) if on)
        return f"DenseOperator({self.space}, flags={flags or '-'})"

    def __repr__(self) -> str:
        return self.__str__()


if __name__ == "__main__":
    space = JointSpace(1, 2)
    print(space)
    op = DenseOperator(np.diag([1.0, -1.0, 0.5, -0.5]), space, hermitian=True)
    print(op, op.spectrum()[0])
