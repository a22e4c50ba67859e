def execute_command(image):
    image_patch = ImagePatch(image)
    jugs = image_patch.find('jug')
    benches = image_patch.find('bench')
    if len(jugs) == 0 or len(benches) == 0:
        return {'function': 'None', 'error': 'Missing bench or jug.'}
    benches.sort(key=lambda b: distance(b, jugs[0]))
    bench = benches[0]
    return {'function': 'navigate_to_object', 'inputs': (bench.horizontal_center, bench.vertical_center), 'box': [bench.left, bench.lower, bench.right, bench.upper]}
