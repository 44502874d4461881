"Service Package of Coverbord"