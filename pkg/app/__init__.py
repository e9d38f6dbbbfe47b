# splinelab
