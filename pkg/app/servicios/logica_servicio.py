# app/servicios/logica_servicio.py
import logging
import math
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from app.core.config import settings
from app.dominio.entidades.informes import EstimacionLogica, Testigo
from app.dominio.entidades.modelo_proceso import ModeloProceso
from app.dominio.excepciones.dominio_excepciones import (
    ConfiguracionInvalidaError,
    PrecondicionFallidaError,
    ViolacionInvarianteError,
)
from app.dominio.logica.formulas import (
    Const,
    Diamond,
    Eval,
    Formula,
    FormulaEstado,
    FormulaTrayectoria,
    Gramatica,
    IntegralPath,
    Min,
    MinusQ,
    Neg,
    Obs,
    TrajMax,
    TrajMin,
    TrajMinusQ,
    TrajPlusQ,
    formula_depth,
    gramatica,
    max_f,
    plus_q,
    sigma_max,
    sigma_min,
    sigma_minus_q,
    sigma_plus_q,
)
from app.dominio.objetos_valor.matriz_pseudometrica import MatrizPseudometrica
from app.dominio.objetos_valor.modo_trayectorias import ModoTrayectorias, TipoModoTrayectorias
from app.dominio.objetos_valor.rejilla_temporal import RejillaTemporal
from app.esquemas.configuracion import PresupuestoLogicoEsquema
from app.servicios.evaluador_formulas import EvaluadorFormulas
from app.servicios.metrica_servicio import discounted_uniform_cost
from app.servicios.trayectorias_servicio import TrayectoriasServicio

logger = logging.getLogger(__name__)

LOGICAS = ("lambda", "sigma")

# Fórmulas por bloque al reducir |f(x) − f(y)| sobre todos los pares.
_TAMANO_BLOQUE = 256
# Holgura numérica de la premisa del gadget de aproximación.
_HOLGURA_PREMISA = 1e-12


def _clave(vector: np.ndarray) -> bytes:
    return np.round(vector, 12).tobytes()


class _BuscadorFormulas:
    """
    Enumeración por niveles de profundidad con deduplicación semántica.

    Dos fórmulas con el mismo vector de valores separan los mismos pares, así
    que solo se conserva la primera (la menos profunda) de cada clase.
    """
    def __init__(self, evaluador: EvaluadorFormulas, logica: str, presupuesto: PresupuestoLogicoEsquema):
        self.evaluador = evaluador
        self.logica = logica
        self.presupuesto = presupuesto
        denominador = presupuesto.rational_denominator_cap
        self.constantes = [Fraction(k, denominador) for k in range(denominador + 1)]
        self.desplazamientos = [Fraction(k, denominador) for k in range(1, denominador)]
        self.tiempos = list(evaluador.tg.times)
        self.tiempos_positivos = [t for t in self.tiempos if t > 0]

        self.aceptadas: list[FormulaEstado] = []
        self.vectores: list[np.ndarray] = []
        self._vistas_estado: set[bytes] = set()
        self._vistas_trayectoria: set[bytes] = set()
        self.estado_por_nivel: list[list[FormulaEstado]] = [[]]
        self.trayectoria_por_nivel: list[list[FormulaTrayectoria]] = [[]]

    @property
    def lleno(self) -> bool:
        return len(self.aceptadas) >= self.presupuesto.max_formulas

    def admitir(self, f: FormulaEstado) -> bool:
        vector = self.evaluador.estado(f)
        clave = _clave(vector)
        if clave in self._vistas_estado:
            return False
        self._vistas_estado.add(clave)
        self.aceptadas.append(f)
        self.vectores.append(vector)
        return True

    def _admitir_trayectoria(self, g: FormulaTrayectoria) -> bool:
        clave = _clave(self.evaluador.trayectoria(g, self.evaluador.caminos))
        if clave in self._vistas_trayectoria:
            return False
        self._vistas_trayectoria.add(clave)
        return True

    def enumerar(self) -> None:
        nivel_1 = [Const(q) for q in self.constantes] + [Obs()]
        self.estado_por_nivel.append([f for f in nivel_1 if not self.lleno and self.admitir(f)])
        self.trayectoria_por_nivel.append([])
        for profundidad in range(2, self.presupuesto.max_depth + 1):
            if self.lleno:
                break
            if self.logica == "lambda":
                nuevas = [f for f in self._candidatos_lambda(profundidad) if self.admitir(f)]
                self.trayectoria_por_nivel.append([])
            else:
                nuevas = [f for f in self._candidatos_sigma(profundidad) if self.admitir(f)]
                # Las de profundidad máxima ya no caben dentro de una integral.
                nuevas_trayectorias = []
                if profundidad < self.presupuesto.max_depth:
                    nuevas_trayectorias = [
                        g for g in self._candidatos_trayectoria(profundidad) if self._admitir_trayectoria(g)
                    ]
                self.trayectoria_por_nivel.append(nuevas_trayectorias)
            self.estado_por_nivel.append(nuevas)
            logger.debug(f"Profundidad {profundidad}: {len(nuevas)} fórmulas nuevas ({len(self.aceptadas)} en total)")

    def _hasta(self, niveles: list[list], profundidad: int) -> list:
        return [f for nivel in niveles[: profundidad + 1] for f in nivel]

    def _limitados(self, candidatos: Iterable[FormulaEstado]) -> Iterator[FormulaEstado]:
        for candidato in candidatos:
            if self.lleno:
                return
            yield candidato

    def _candidatos_lambda(self, profundidad: int) -> Iterator[FormulaEstado]:
        previas = self.estado_por_nivel[profundidad - 1]
        menores = self._hasta(self.estado_por_nivel, profundidad - 2)

        def generar():
            for f in previas:
                yield Neg(f)
                for q in self.desplazamientos:
                    yield MinusQ(f, q)
                for t in self.tiempos_positivos:
                    yield Diamond(t, f)
            for i, f in enumerate(previas):
                for g in previas[i + 1:]:
                    yield Min(f, g)
                for g in menores:
                    yield Min(f, g)

        return self._limitados(generar())

    def _candidatos_sigma(self, profundidad: int) -> Iterator[FormulaEstado]:
        previas = self.estado_por_nivel[profundidad - 1]
        trayectorias = self.trayectoria_por_nivel[profundidad - 1]

        def generar():
            for f in previas:
                yield Neg(f)
            for g in trayectorias:
                yield IntegralPath(g)

        return self._limitados(generar())

    def _candidatos_trayectoria(self, profundidad: int) -> Iterator[FormulaTrayectoria]:
        """Fórmulas de trayectoria de profundidad exacta `profundidad`."""
        previas = self.trayectoria_por_nivel[profundidad - 1]
        menores = self._hasta(self.trayectoria_por_nivel, profundidad - 2)
        estados = self.estado_por_nivel[profundidad - 1]
        tope = self.presupuesto.max_formulas
        producidas = 0

        def generar():
            for f in estados:
                for t in self.tiempos:
                    yield Eval(f, t)
            for g in previas:
                for q in self.desplazamientos:
                    yield TrajMinusQ(g, q)
                    yield TrajPlusQ(g, q)
            for i, g in enumerate(previas):
                for h in previas[i + 1:] + menores:
                    yield TrajMin(g, h)
                    yield TrajMax(g, h)

        for g in generar():
            if producidas >= tope:
                return
            producidas += 1
            yield g

    # --- Profundización aleatoria ---

    def mutar(self, w: FormulaEstado, generador: np.random.Generator) -> Optional[FormulaEstado]:
        q = self.desplazamientos[generador.integers(len(self.desplazamientos))] if self.desplazamientos else None
        pareja = self.aceptadas[generador.integers(len(self.aceptadas))]
        if self.logica == "lambda":
            opciones = [lambda: Neg(w), lambda: Min(w, pareja), lambda: max_f(w, pareja)]
            if q is not None:
                opciones += [lambda: MinusQ(w, q), lambda: plus_q(w, q)]
            if self.tiempos_positivos:
                t = self.tiempos_positivos[generador.integers(len(self.tiempos_positivos))]
                opciones.append(lambda: Diamond(t, w))
        else:
            t = self.tiempos[generador.integers(len(self.tiempos))]
            opciones = [
                lambda: Neg(w),
                lambda: sigma_min(w, pareja),
                lambda: sigma_max(w, pareja),
                lambda: IntegralPath(Eval(w, t)),
            ]
            if q is not None:
                opciones += [lambda: sigma_minus_q(w, q), lambda: sigma_plus_q(w, q)]
        return opciones[generador.integers(len(opciones))]()


class _ReduccionPares:
    """Máximo por pares de |f(x) − f(y)| con el índice de la primera fórmula que lo alcanza."""
    def __init__(self, n: int):
        self.mejor = np.zeros((n, n))
        self.indice = np.zeros((n, n), dtype=np.int64)
        self.procesadas = 0

    def fusionar(self, vectores: Sequence[np.ndarray]) -> None:
        for inicio in range(0, len(vectores), _TAMANO_BLOQUE):
            bloque = np.stack(vectores[inicio:inicio + _TAMANO_BLOQUE])
            separacion = np.abs(bloque[:, :, None] - bloque[:, None, :])
            posicion = separacion.argmax(axis=0)
            maximo = np.take_along_axis(separacion, posicion[None], axis=0)[0]
            # Estrictamente mayor: ante empates gana la fórmula generada antes.
            mejora = maximo > self.mejor
            self.mejor = np.where(mejora, maximo, self.mejor)
            self.indice = np.where(mejora, posicion + self.procesadas + inicio, self.indice)
        self.procesadas += len(vectores)


class LogicaServicio:
    """
    Servicio de aplicación para las lógicas Λ y L_σ / L_τ.

    Evalúa fórmulas, estima λ̂^c y ℓ̂^c como cotas inferiores de δ̄^c y d̄^c y
    construye las fórmulas que aproximan un objetivo en un par de estados.
    """
    def __init__(self, trayectorias: TrayectoriasServicio):
        self.trayectorias = trayectorias

    def evaluador(
        self, model: ModeloProceso, c: float, tg: RejillaTemporal, path_mode: Optional[ModoTrayectorias] = None
    ) -> EvaluadorFormulas:
        return EvaluadorFormulas(model, c, tg, self.trayectorias, path_mode)

    def eval_state(
        self,
        f: FormulaEstado,
        model: ModeloProceso,
        x: int,
        c: float,
        tg: RejillaTemporal,
        path_mode: Optional[ModoTrayectorias] = None,
    ) -> float:
        """
        Valor f(x) de una fórmula de Λ o L_σ.

        Raises:
            TiempoNoSoportadoError: Si un tiempo de la fórmula no es evaluable.
        """
        if not 0 <= x < model.n:
            raise ConfiguracionInvalidaError(f"El estado {x} no existe en un modelo de {model.n} estados")
        return float(self.evaluador(model, c, tg, path_mode).estado(f)[x])

    def eval_traj(
        self, g: FormulaTrayectoria, omega: Sequence[int], model: ModeloProceso, c: float, tg: RejillaTemporal
    ) -> float:
        """Valor g(ω) de una fórmula de L_τ sobre una trayectoria muestreada en tg."""
        camino = np.asarray(omega, dtype=np.int64).reshape(1, -1)
        if camino.shape[1] != len(tg):
            raise ConfiguracionInvalidaError(f"La trayectoria tiene {camino.shape[1]} estados y la rejilla {len(tg)} tiempos")
        return float(self.evaluador(model, c, tg).trayectoria(g, camino)[0])

    def evaluation_table(
        self,
        formulas: Sequence[FormulaEstado],
        model: ModeloProceso,
        c: float,
        tg: RejillaTemporal,
        path_mode: Optional[ModoTrayectorias] = None,
    ) -> np.ndarray:
        """Tabla fórmulas × estados."""
        evaluador = self.evaluador(model, c, tg, path_mode)
        if not formulas:
            return np.zeros((0, model.n))
        return np.vstack([evaluador.estado(f) for f in formulas])

    def estimate_logic_metric(
        self,
        logic: str,
        model: ModeloProceso,
        c: float,
        tg: RejillaTemporal,
        budget: PresupuestoLogicoEsquema,
        path_mode: Optional[ModoTrayectorias] = None,
    ) -> EstimacionLogica:
        """
        Cota inferior sup_f |f(x) − f(y)| sobre las fórmulas que caben en el presupuesto.

        Enumera por profundidad hasta max_depth (o max_formulas fórmulas) y
        después, si deepening_rounds > 0, muta al azar los testigos actuales.
        Agotar el presupuesto es la terminación normal.
        """
        if logic not in LOGICAS:
            raise ConfiguracionInvalidaError(f"Lógica desconocida: '{logic}' (use lambda o sigma)")
        modo = path_mode or ModoTrayectorias(TipoModoTrayectorias.AUTOMATICO, budget.path_samples, budget.seed)
        evaluador = self.evaluador(model, c, tg, modo)
        buscador = _BuscadorFormulas(evaluador, logic, budget)
        buscador.enumerar()
        reduccion = _ReduccionPares(model.n)
        reduccion.fusionar(buscador.vectores)
        logger.info(f"Búsqueda {logic}: {len(buscador.aceptadas)} fórmulas distintas hasta profundidad {budget.max_depth}")

        if budget.deepening_rounds:
            self._profundizar(buscador, reduccion, budget)

        matriz = MatrizPseudometrica(reduccion.mejor)
        testigos = [
            Testigo(
                par=(x, y),
                valor=float(reduccion.mejor[x, y]),
                formula=buscador.aceptadas[int(reduccion.indice[x, y])],
            )
            for x in range(model.n)
            for y in range(x + 1, model.n)
        ]
        return EstimacionLogica(
            logica=logic,
            matriz=matriz,
            testigos=testigos,
            formulas=list(buscador.aceptadas),
            exacta=logic == "lambda" or evaluador.exacto,
        )

    @staticmethod
    def _profundizar(buscador: _BuscadorFormulas, reduccion: _ReduccionPares, budget: PresupuestoLogicoEsquema) -> None:
        generador = np.random.default_rng(budget.seed)
        profundidad_maxima = budget.max_depth + budget.deepening_depth
        for ronda in range(budget.deepening_rounds):
            superior = np.triu_indices(reduccion.mejor.shape[0], k=1)
            testigos = sorted({int(i) for i in reduccion.indice[superior]})
            inicio = len(buscador.aceptadas)
            for indice in testigos:
                candidato = buscador.mutar(buscador.aceptadas[indice], generador)
                if formula_depth(candidato) <= profundidad_maxima:
                    buscador.admitir(candidato)
            nuevas = buscador.vectores[inicio:]
            if nuevas:
                reduccion.fusionar(nuevas)
            logger.debug(f"Ronda {ronda + 1} de profundización: {len(nuevas)} fórmulas nuevas")

    # --- Gadget de aproximación ---

    @staticmethod
    def _racionales(h_alto: float, h_bajo: float, f_bajo: float, delta: float) -> tuple[Fraction, Fraction, Fraction]:
        """p, q, r en los extremos de sus intervalos admisibles, con denominador 2^bits ≥ 1/δ."""
        bits = max(settings.GADGET_DENOMINATOR_BITS, math.ceil(math.log2(1.0 / delta)))
        denominador = 2 ** bits
        p = Fraction(math.floor(f_bajo * denominador), denominador)
        q = Fraction(math.floor((h_alto - h_bajo) * denominador), denominador)
        r = Fraction(math.ceil(h_bajo * denominador), denominador)
        return min(max(p, Fraction(0)), Fraction(1)), min(max(q, Fraction(0)), Fraction(1)), min(r, Fraction(1))

    @staticmethod
    def _validar_objetivo(h_values: tuple[float, float], delta: float) -> None:
        if not delta > 0:
            raise ConfiguracionInvalidaError(f"δ debe ser positivo y es {delta}")
        if any(not 0 <= h <= 1 for h in h_values):
            raise PrecondicionFallidaError(f"los valores objetivo {h_values} deben estar en [0, 1]")

    def gadget(
        self,
        f: FormulaEstado,
        model: ModeloProceso,
        z: int,
        z2: int,
        h_values: tuple[float, float],
        delta: float,
        c: float,
        tg: RejillaTemporal,
        path_mode: Optional[ModoTrayectorias] = None,
    ) -> FormulaEstado:
        """
        Fórmula g = (min{f ⊖ p, q}) ⊕ r con |h(z) − g(z)| ≤ 2δ y |h(z′) − g(z′)| ≤ 2δ.

        Se construye en la gramática de f (Λ o L_σ).

        Raises:
            PrecondicionFallidaError: Si |h(z) − h(z′)| > |f(z) − f(z′)|.
            ViolacionInvarianteError: Si la fórmula construida no cumple la cota.
        """
        self._validar_objetivo(h_values, delta)
        evaluador = self.evaluador(model, c, tg, path_mode)
        valores = evaluador.estado(f)
        h_z, h_z2 = h_values
        if abs(h_z - h_z2) > abs(valores[z] - valores[z2]) + _HOLGURA_PREMISA:
            raise PrecondicionFallidaError(
                f"|h(z) − h(z′)| = {abs(h_z - h_z2):.6g} supera |f(z) − f(z′)| = {abs(valores[z] - valores[z2]):.6g}"
            )
        alto, bajo, h_alto, h_bajo = (z, z2, h_z, h_z2) if h_z >= h_z2 else (z2, z, h_z2, h_z)
        orientada = f if valores[alto] >= valores[bajo] else Neg(f)
        p, q, r = self._racionales(h_alto, h_bajo, float(evaluador.estado(orientada)[bajo]), delta)

        sigma = gramatica(f) == Gramatica.SIGMA
        if q == 0:
            g = Const(r)
        elif sigma:
            g = sigma_plus_q(sigma_min(sigma_minus_q(orientada, p), Const(q)), r)
        else:
            g = plus_q(Min(MinusQ(orientada, p), Const(q)), r)

        obtenidos = evaluador.estado(g)
        self._comprobar_aproximacion(
            (float(obtenidos[z]), float(obtenidos[z2])), h_values, delta, g
        )
        return g

    def gadget_trayectorias(
        self,
        f: FormulaEstado,
        s,
        omega: Sequence[int],
        omega2: Sequence[int],
        h_values: tuple[float, float],
        delta: float,
        model: ModeloProceso,
        c: float,
        tg: RejillaTemporal,
    ) -> FormulaTrayectoria:
        """
        Forma de trayectorias: g = (min{(f ∘ ev_s) ⊖ p, q}) ⊕ r sobre ω, ω′.

        La premisa es |h(ω) − h(ω′)| ≤ |c^s f(ω(s)) − c^s f(ω′(s))|.
        """
        self._validar_objetivo(h_values, delta)
        evaluador = self.evaluador(model, c, tg)
        caminos = np.vstack([np.asarray(omega, dtype=np.int64), np.asarray(omega2, dtype=np.int64)])
        evaluado = evaluador.trayectoria(Eval(f, s), caminos)
        h_w, h_w2 = h_values
        if abs(h_w - h_w2) > abs(evaluado[0] - evaluado[1]) + _HOLGURA_PREMISA:
            raise PrecondicionFallidaError(
                f"|h(ω) − h(ω′)| = {abs(h_w - h_w2):.6g} supera la separación de f ∘ ev_{s}"
            )
        alto, bajo, h_alto, h_bajo = (0, 1, h_w, h_w2) if h_w >= h_w2 else (1, 0, h_w2, h_w)
        orientada = Eval(f, s) if evaluado[alto] >= evaluado[bajo] else Eval(Neg(f), s)
        p, q, r = self._racionales(h_alto, h_bajo, float(evaluador.trayectoria(orientada, caminos)[bajo]), delta)

        if q == 0:
            g = Eval(Const(r), 0)
        else:
            g = TrajPlusQ(TrajMin(TrajMinusQ(orientada, p), Eval(Const(q), 0)), r)

        obtenidos = evaluador.trayectoria(g, caminos)
        self._comprobar_aproximacion((float(obtenidos[0]), float(obtenidos[1])), h_values, delta, g)
        return g

    @staticmethod
    def _comprobar_aproximacion(
        obtenidos: tuple[float, float], h_values: tuple[float, float], delta: float, g: Formula
    ) -> None:
        errores = [abs(a - b) for a, b in zip(obtenidos, h_values)]
        if max(errores) > 2 * delta + _HOLGURA_PREMISA:
            raise ViolacionInvarianteError(
                f"La fórmula construida se aleja {max(errores):.3e} del objetivo (cota {2 * delta:.3e})",
                violaciones=[f"errores {errores} para {g}"],
            )

    # --- Cotas de Lipschitz ---

    def lipschitz_check(
        self,
        formulas: Sequence[FormulaEstado],
        model: ModeloProceso,
        bound: MatrizPseudometrica,
        c: float,
        tg: RejillaTemporal,
        path_mode: Optional[ModoTrayectorias] = None,
    ) -> float:
        """Mayor exceso de |f(x) − f(y)| sobre bound(x, y) (0 si todas las fórmulas lo respetan)."""
        evaluador = self.evaluador(model, c, tg, path_mode)
        vectores = [evaluador.estado(f) for f in formulas]
        peor = 0.0
        for inicio in range(0, len(vectores), _TAMANO_BLOQUE):
            bloque = np.stack(vectores[inicio:inicio + _TAMANO_BLOQUE])
            exceso = np.abs(bloque[:, :, None] - bloque[:, None, :]) - bound.values[None]
            peor = max(peor, float(exceso.max(initial=0.0)))
        return peor

    def lipschitz_check_trayectorias(
        self,
        formulas: Sequence[FormulaTrayectoria],
        model: ModeloProceso,
        bound: MatrizPseudometrica,
        c: float,
        tg: RejillaTemporal,
        path_mode: Optional[ModoTrayectorias] = None,
        max_trayectorias: int = 2000,
    ) -> float:
        """
        Mayor exceso de |g(ω) − g(ω′)| sobre U_c(bound)(ω, ω′) en las trayectorias del modelo.

        Se usan como mucho `max_trayectorias` trayectorias distintas (las primeras en orden lexicográfico).
        """
        evaluador = self.evaluador(model, c, tg, path_mode)
        caminos = np.unique(evaluador.caminos, axis=0)[:max_trayectorias]
        costes = discounted_uniform_cost(bound, caminos, caminos, tg, c)
        peor = 0.0
        for g in formulas:
            valores = evaluador.trayectoria(g, caminos)
            peor = max(peor, float((np.abs(valores[:, None] - valores[None, :]) - costes).max(initial=0.0)))
        return peor
